use num_complex::Complex;

use crate::error::{invalid, Result};
use crate::modring::{additive_character, inv_mod, Character, ComplexVector};
use crate::scalar::Scalar;

fn zero<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// `K_χ(n, m) = Σ_{x ∈ F_p^*} χ(x) e_p(nx + m x^{-1})`.
pub fn kloosterman<T: Scalar>(chi: &Character, n: u64, m: u64) -> Complex<T> {
    let p = chi.p();
    let chi_v = chi.values::<T>();
    let e: Vec<Complex<T>> = (0..p as i64).map(|t| additive_character(t, p)).collect();
    kloosterman_with(p, &chi_v, &e, n, m)
}

fn kloosterman_with<T: Scalar>(p: u64, chi: &[Complex<T>], e: &[Complex<T>], n: u64, m: u64) -> Complex<T> {
    let (n, m) = (n % p, m % p);
    let mut s = zero();
    for x in 1..p {
        let xi = inv_mod(x, p).expect("nonzero residue mod prime");
        let arg = (n as u128 * x as u128 + m as u128 * xi as u128) % p as u128;
        s = s + chi[x as usize] * e[arg as usize];
    }
    s
}

/// All `K_χ(n, m)` for `n, m ∈ F_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct KloostermanTable<T> {
    p: u64,
    values: Vec<Complex<T>>,
}

impl<T: Scalar> KloostermanTable<T> {
    pub fn new(chi: &Character) -> Self {
        let p = chi.p();
        let chi_v = chi.values::<T>();
        let e: Vec<Complex<T>> = (0..p as i64).map(|t| additive_character(t, p)).collect();
        let mut values = Vec::with_capacity((p * p) as usize);
        for n in 0..p {
            for m in 0..p {
                values.push(kloosterman_with(p, &chi_v, &e, n, m));
            }
        }
        Self { p, values }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn get(&self, n: u64, m: u64) -> Complex<T> {
        self.values[((n % self.p) * self.p + m % self.p) as usize]
    }
}

/// `S_χ(α, β)` evaluated twice: as a direct triple sum and from a table of
/// Kloosterman sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilinearForm<T> {
    pub direct: Complex<T>,
    pub tabulated: Complex<T>,
}

impl<T: Scalar> BilinearForm<T> {
    /// `|direct - tabulated| / max(|direct|, 1)`.
    pub fn rel_diff(&self) -> T {
        (self.direct - self.tabulated).norm() / self.direct.norm().max(T::one())
    }
}

/// `S_χ(α, β) = Σ_{n,m} α(n) β(m) K_χ(n, m)`.
pub fn bilinear_form<T: Scalar>(
    chi: &Character,
    alpha: &ComplexVector<T>,
    beta: &ComplexVector<T>,
) -> Result<BilinearForm<T>> {
    let p = chi.p();
    if alpha.len() != p as usize || beta.len() != p as usize {
        return Err(invalid(format!("bilinear_form needs vectors of length p = {p}")));
    }
    let chi_v = chi.values::<T>();
    let e: Vec<Complex<T>> = (0..p as i64).map(|t| additive_character(t, p)).collect();
    let inv: Vec<u64> = (0..p).map(|x| inv_mod(x, p).unwrap_or(0)).collect();
    let mut direct = zero();
    for n in 0..p {
        let a = alpha[n as usize];
        if a == zero() {
            continue;
        }
        for m in 0..p {
            let b = beta[m as usize];
            if b == zero() {
                continue;
            }
            let mut k = zero();
            for x in 1..p {
                let arg = (n * x + m * inv[x as usize]) % p;
                k = k + chi_v[x as usize] * e[arg as usize];
            }
            direct = direct + a * b * k;
        }
    }
    let table = KloostermanTable::<T>::new(chi);
    let mut tabulated = zero();
    for n in 0..p {
        let row: Complex<T> = (0..p).map(|m| beta[m as usize] * table.get(n, m)).sum();
        tabulated = tabulated + alpha[n as usize] * row;
    }
    Ok(BilinearForm { direct, tabulated })
}

/// `(Σ_t |f̂(t)|^r)^{1/r}` with the unnormalized transform `f̂(t) = Σ_x f(x) e_p(tx)`.
pub fn fourier_lp_norm<T: Scalar>(f: &ComplexVector<T>, r: T) -> T {
    let hat = crate::modring::dft(f);
    hat.as_slice()
        .iter()
        .map(|z| z.norm().powf(r))
        .sum::<T>()
        .powf(T::one() / r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn orthogonality_and_gauss_sums() {
        for p in [7u64, 11, 13, 17] {
            for chi in Character::all(p).unwrap().into_iter().filter(|c| !c.is_principal()) {
                assert!(kloosterman::<f64>(&chi, 0, 0).norm() < 1e-9);
                for n in 1..p {
                    let k = kloosterman::<f64>(&chi, n, 0);
                    assert!((k.norm() - (p as f64).sqrt()).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn weil_bound_for_classical_sums() {
        for p in [7u64, 11, 13] {
            let chi = Character::principal(p).unwrap();
            let k = kloosterman::<f64>(&chi, 1, 1);
            // brute force real sum of cos(2π(x + x^{-1})/p)
            let brute: f64 = (1..p)
                .map(|x| {
                    let xi = inv_mod(x, p).unwrap();
                    (std::f64::consts::TAU * ((x + xi) % p) as f64 / p as f64).cos()
                })
                .sum();
            assert!((k.re - brute).abs() < 1e-9 && k.im.abs() < 1e-9);
            assert!(k.norm() <= 2.0 * (p as f64).sqrt());
        }
    }

    #[test]
    fn bilinear_impulses_and_dual_path() {
        let p = 11;
        let chi = Character::new(p, 3).unwrap();
        let a = ComplexVector::<f64>::indicator(p as usize, [4]);
        let b = ComplexVector::<f64>::indicator(p as usize, [7]);
        let s = bilinear_form(&chi, &a, &b).unwrap();
        assert!((s.direct - kloosterman::<f64>(&chi, 4, 7)).norm() < 1e-12);
        let z = ComplexVector::<f64>::zeros(p as usize);
        assert_eq!(bilinear_form(&chi, &z, &z).unwrap().direct, Complex::new(0.0, 0.0));
        assert!(bilinear_form(&chi, &z, &ComplexVector::zeros(3)).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [5u64, 11, 23, 31] {
            for chi in [Character::legendre(p).unwrap(), Character::new(p, 1).unwrap()] {
                let rand_vec = |rng: &mut ChaCha8Rng| {
                    ComplexVector::new(
                        (0..p)
                            .map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                            .collect(),
                    )
                    .unwrap()
                };
                let (a, b) = (rand_vec(&mut rng), rand_vec(&mut rng));
                assert!(bilinear_form::<f64>(&chi, &a, &b).unwrap().rel_diff() < 1e-6);
            }
        }
    }

    #[test]
    fn lp_norm_of_delta() {
        let d = ComplexVector::<f64>::indicator(7, [0]);
        assert!((fourier_lp_norm(&d, 4.0 / 3.0) - 7f64.powf(0.75)).abs() < 1e-12);
    }
}
