use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modring::{inv_mod, Character, Mat2};
use crate::scalar::Scalar;
use crate::setops::PointSet;

use super::{require_prime_character, MatrixFamily, WeightedSet};

fn zero<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Sum of per-chunk partial sums in chunk order.
fn ordered_sum<T: Scalar>(parts: Vec<Complex<T>>) -> Complex<T> {
    parts.into_iter().fold(zero(), |s, z| s + z)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolaSum<T> {
    pub value: Complex<T>,
    /// Number of `(a, x, b, y)` with `(a + x)(b + y) = 1`.
    pub solutions: u64,
    /// `√(|A||B|)·|X||Y|`.
    pub trivial_bound: f64,
}

/// `Σ_{(a+x)(b+y) = 1} c_A(a) c_B(b) χ(a + x)` over `A × X × B × Y`.
pub fn hyperbola_sum<T: Scalar>(
    chi: &Character,
    a: &WeightedSet<T>,
    b: &WeightedSet<T>,
    x: &PointSet,
    y: &PointSet,
) -> Result<HyperbolaSum<T>> {
    let p = chi.p();
    for q in [a.q(), b.q(), x.q(), y.q()] {
        require_prime_character(p, q)?;
    }
    let chi_v = chi.values::<T>();
    let in_y = y.bitmap();
    let xs = x.residues();
    let parts: Vec<(Complex<T>, u64)> = a
        .iter()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(av, aw)| {
            let (mut s, mut n) = (zero::<T>(), 0u64);
            for &xv in xs {
                let sum = (av + xv) % p;
                let Some(t) = inv_mod(sum, p) else { continue };
                let twist = aw * chi_v[sum as usize];
                for (bv, bw) in b.iter() {
                    if in_y[((t + p - bv) % p) as usize] {
                        s = s + twist * bw;
                        n += 1;
                    }
                }
            }
            (s, n)
        })
        .collect();
    let solutions = parts.iter().map(|p| p.1).sum();
    Ok(HyperbolaSum {
        value: ordered_sum(parts.into_iter().map(|p| p.0).collect()),
        solutions,
        trivial_bound: ((a.len() * b.len()) as f64).sqrt() * (x.len() * y.len()) as f64,
    })
}

/// `g_{a,b} = (-b, 1 - ab | 1, a)`, so that `g_{a,b} x = -b + 1/(a + x)`.
pub fn hyperbola_matrix(a: u64, b: u64, p: u64) -> Mat2 {
    let (a, b) = (a % p, b % p);
    let ab = (a as u128 * b as u128 % p as u128) as u64;
    Mat2::new((p - b) % p, (1 + p - ab) % p, 1, a, p)
}

/// `Σ_{a ∈ A, b ∈ B} c_A(a) c_B(b) Σ_{g ∈ G : ga = b} χ(γa + δ)`.
pub fn group_twisted_sum<T: Scalar>(
    chi: &Character,
    g: &MatrixFamily,
    a: &WeightedSet<T>,
    b: &WeightedSet<T>,
) -> Result<Complex<T>> {
    let p = chi.p();
    require_prime_character(p, g.p())?;
    require_prime_character(p, a.q())?;
    require_prime_character(p, b.q())?;
    let chi_v = chi.values::<T>();
    let cb = b.dense();
    let in_b = b.base().bitmap();
    let parts: Vec<Complex<T>> = a
        .iter()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(av, aw)| {
            let mut s = zero::<T>();
            for h in g.elements() {
                let den = h.denominator(av, p);
                let Some(img) = h.mobius(av, p) else { continue };
                if in_b[img as usize] {
                    s = s + aw * cb[img as usize] * chi_v[den as usize];
                }
            }
            s
        })
        .collect();
    Ok(ordered_sum(parts))
}

/// Both sides of the lift identity `Σ_x̄ 𝒜(x̄) Σ_g 𝓑(g x̄) = (p-1)·Σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftCheck<T> {
    pub lifted: Complex<T>,
    /// `(p - 1)` times [`group_twisted_sum`].
    pub scaled: Complex<T>,
    pub residual: T,
    /// `(p - 1)·√(|A||B|)·|G|`.
    pub trivial_bound: T,
}

impl<T: Scalar> LiftCheck<T> {
    pub fn holds(&self, rel_tol: T) -> bool {
        self.residual <= rel_tol * self.trivial_bound.max(T::one())
    }
}

/// Lifts `c_A, c_B` to `F_p^2 ∖ {0}` by `𝒜(λa, λ) = c_A(a) χ̄(λ)`,
/// `𝓑(μb, μ) = c_B(b) χ(μ)`, lets `G` act linearly, and compares with the
/// projective sum.
pub fn projective_lift_check<T: Scalar>(
    chi: &Character,
    g: &MatrixFamily,
    a: &WeightedSet<T>,
    b: &WeightedSet<T>,
) -> Result<LiftCheck<T>> {
    let p = chi.p();
    let chi_v = chi.values::<T>();
    let pu = p as usize;
    let mut lift_b = vec![zero::<T>(); pu * pu];
    for (bv, bw) in b.iter() {
        for mu in 1..p {
            let x = (bv as u128 * mu as u128 % p as u128) as usize;
            lift_b[x * pu + mu as usize] = bw * chi_v[mu as usize];
        }
    }
    let pts: Vec<(u64, Complex<T>)> = a.iter().collect();
    let parts: Vec<Complex<T>> = pts
        .par_iter()
        .map(|&(av, aw)| {
            let mut s = zero::<T>();
            for lam in 1..p {
                let v = [(av as u128 * lam as u128 % p as u128) as u64, lam];
                let lift_a = aw * chi_v[lam as usize].conj();
                let inner: Complex<T> = g
                    .elements()
                    .iter()
                    .map(|h| {
                        let [x, y] = h.apply(v, p);
                        lift_b[x as usize * pu + y as usize]
                    })
                    .fold(zero(), |s, z| s + z);
                s = s + lift_a * inner;
            }
            s
        })
        .collect();
    let lifted = ordered_sum(parts);
    let scaled = group_twisted_sum(chi, g, a, b)? * T::of_u64(p - 1);
    Ok(LiftCheck {
        lifted,
        scaled,
        residual: (lifted - scaled).norm(),
        trivial_bound: T::of_u64(p - 1) * T::of_u64((a.len() * b.len()) as u64).sqrt() * T::of_u64(g.len() as u64),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntersectionVariant {
    /// `A ∩ A^{-1}`.
    Multiplicative,
    /// `A^{-1} ∩ (A^{-1} + 1)`.
    Shifted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntersectionSum<T> {
    pub value: Complex<T>,
    pub size: usize,
    /// `|A|² / p`.
    pub expected_size: f64,
}

impl<T: Scalar> IntersectionSum<T> {
    /// `|Σ χ| / |intersection|`, zero for an empty intersection.
    pub fn cancellation_ratio(&self) -> f64 {
        if self.size == 0 {
            0.0
        } else {
            self.value.norm().as_f64() / self.size as f64
        }
    }
}

/// `Σ_{x ∈ S} χ(x)` for `S = A ∩ A^{-1}` or `S = A^{-1} ∩ (A^{-1} + 1)`.
pub fn intersection_char_sum<T: Scalar>(
    chi: &Character,
    a: &PointSet,
    variant: IntersectionVariant,
) -> Result<IntersectionSum<T>> {
    let p = chi.p();
    require_prime_character(p, a.q())?;
    let mut inv = vec![false; p as usize];
    for &x in a.residues() {
        let xi = inv_mod(x, p).ok_or(Error::NonUnit { value: x, q: p })?;
        inv[xi as usize] = true;
    }
    let in_a = a.bitmap();
    let members: Vec<u64> = (1..p)
        .filter(|&x| match variant {
            IntersectionVariant::Multiplicative => in_a[x as usize] && inv[x as usize],
            IntersectionVariant::Shifted => inv[x as usize] && inv[((x + p - 1) % p) as usize],
        })
        .collect();
    let chi_v = chi.values::<T>();
    Ok(IntersectionSum {
        value: members.iter().fold(zero(), |s, &x| s + chi_v[x as usize]),
        size: members.len(),
        expected_size: (a.len() * a.len()) as f64 / p as f64,
    })
}
