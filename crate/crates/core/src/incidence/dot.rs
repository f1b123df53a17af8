use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::modring::{additive_character, Modulus};
use crate::scalar::Scalar;
use crate::setops::PointSet;
use crate::Rational;

#[inline]
pub fn dot_product_mod(a: &[u64], b: &[u64], q: u64) -> u64 {
    let s: u128 = a.iter().zip(b).map(|(&x, &y)| x as u128 * y as u128).sum();
    (s % q as u128) as u64
}

fn require_unit(m: &Modulus, lambda: u64) -> Result<()> {
    if m.is_unit(lambda) {
        Ok(())
    } else {
        Err(Error::InvalidLambda {
            lambda,
            q: m.q(),
            reason: "lambda must be a unit",
        })
    }
}

/// `#{(a, b) ∈ A × B : a·b ≡ λ (mod q)}` by a parallel double loop.
pub fn count_dot(a: &PointSet, b: &PointSet, lambda: u64) -> Result<u64> {
    let m = a.modulus();
    require_unit(m, lambda)?;
    if a.q() != b.q() || a.dim() != b.dim() {
        return Err(invalid("count_dot needs sets in the same Z_q^n"));
    }
    let (q, lambda, n) = (m.q(), lambda % m.q(), a.dim());
    let count = a
        .as_flat()
        .par_chunks_exact(n)
        .map(|x| b.iter().filter(|y| dot_product_mod(x, y, q) == lambda).count() as u64)
        .sum();
    Ok(count)
}

/// Result of counting through the additive-character expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacterCount<T> {
    pub value: Complex<T>,
    pub rounded: u64,
    /// Distance of `value` from `rounded`.
    pub residual: T,
}

/// Independent count `q^{-1} Σ_t e_q(-tλ) Σ_{a,b} e_q(t·a·b)`.
///
/// `O(q·|A||B|)`; meant as a cross-check for [`count_dot`] at small `q`.
pub fn count_dot_via_characters<T: Scalar>(a: &PointSet, b: &PointSet, lambda: u64) -> Result<CharacterCount<T>> {
    require_unit(a.modulus(), lambda)?;
    let q = a.q();
    let roots: Vec<Complex<T>> = (0..q as i64).map(|t| additive_character(t, q)).collect();
    let zero = Complex::new(T::zero(), T::zero());
    let mut total = zero;
    for t in 0..q {
        let inner: Complex<T> = a
            .iter()
            .map(|x| {
                b.iter()
                    .map(|y| {
                        let e = (t as u128 * dot_product_mod(x, y, q) as u128 % q as u128) as usize;
                        roots[e]
                    })
                    .fold(zero, |s, z| s + z)
            })
            .fold(zero, |s, z| s + z);
        let shift = (q - (t as u128 * (lambda % q) as u128 % q as u128) as u64) % q;
        total = total + roots[shift as usize] * inner;
    }
    let value = total / T::of_u64(q);
    let rounded = value.re.round().max(T::zero());
    Ok(CharacterCount {
        value,
        rounded: rounded.to_u64().unwrap_or(0),
        residual: (value - Complex::new(rounded, T::zero())).norm(),
    })
}

/// Main term `|A||B| q^{n-1} / J_n(q)`, exact.
pub fn dot_main_term(size_a: u64, size_b: u64, q: &Modulus, n: usize) -> Rational {
    let num = BigInt::from(size_a) * BigInt::from(size_b) * BigInt::from(q.q()).pow(n as u32 - 1);
    Rational::new(num, BigInt::from(q.jordan_totient(n as u32)))
}

/// `Θ(n) = Σ_{0 ≤ r_j ≤ ω_j} ∏_j p_j^{-r_j(n-2)}`, evaluated as the product
/// of per-prime geometric sums.
pub fn theta(q: &Modulus, n: usize) -> Result<Rational> {
    if n < 2 {
        return Err(invalid("theta needs n >= 2"));
    }
    let k = (n - 2) as u32;
    Ok(q.factors()
        .iter()
        .map(|&(p, e)| {
            let ratio = Rational::new(BigInt::one(), BigInt::from(p).pow(k));
            let mut term = Rational::one();
            let mut sum = Rational::one();
            for _ in 0..e {
                term *= &ratio;
                sum += &term;
            }
            sum
        })
        .product())
}

/// Exponent `n_*`: 1 for `n = 2, 3`, `n - 3` beyond.
pub fn n_star(n: usize) -> u32 {
    if n <= 3 {
        1
    } else {
        (n - 3) as u32
    }
}

/// `2 q^{n-1} √(|A||B|) (Θ(n) m^{-n_*})^{1/4}`.
pub fn dot_bound_rhs(q: &Modulus, n: usize, size_a: u64, size_b: u64) -> Result<f64> {
    let th = theta(q, n)?.to_f64().unwrap_or(f64::INFINITY);
    let m = q.least_prime() as f64;
    let qf = q.q() as f64;
    Ok(2.0
        * qf.powi(n as i32 - 1)
        * ((size_a as f64) * (size_b as f64)).sqrt()
        * (th * m.powi(-(n_star(n) as i32))).powf(0.25))
}

/// Warning when the least prime divisor of `q` is below 5.
pub fn dot_hypothesis_warning(q: &Modulus) -> Option<String> {
    (q.least_prime() < 5).then(|| {
        format!(
            "least prime divisor {} of q={} is below 5; bound evaluated outside its hypothesis",
            q.least_prime(),
            q.q()
        )
    })
}

/// Comparison column `√(q|A||B|)` from the finite-geometry bound.
pub fn vinh_rhs(q: u64, size_a: u64, size_b: u64) -> f64 {
    (q as f64 * size_a as f64 * size_b as f64).sqrt()
}
