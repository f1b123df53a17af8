//! Arithmetic over `Z_q`: factorization, totients, inverses, characters and
//! the additive Fourier transform.

mod character;
mod fourier;
mod mat2;

pub use character::{primitive_root, Character, DlogTable};
pub use fourier::{additive_character, balanced, dft, inverse_dft, ComplexVector};
pub use mat2::Mat2;

use crate::error::{Error, Result};

/// A modulus `q >= 2` together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Modulus {
    q: u64,
    factors: Vec<(u64, u32)>,
}

impl Modulus {
    pub fn new(q: u64) -> Result<Self> {
        factorize(q)
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Prime factors `(p_j, ω_j)`, sorted by increasing prime.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Least prime divisor `m`.
    pub fn least_prime(&self) -> u64 {
        self.factors[0].0
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    /// Number of distinct prime divisors `ω(q)`.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    /// Number of divisors `τ(q)`.
    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| u64::from(e) + 1).product()
    }

    pub fn jordan_totient(&self, k: u32) -> u128 {
        jordan_totient(k, self.q)
    }

    pub fn euler_phi(&self) -> u128 {
        jordan_totient(1, self.q)
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.q
    }

    pub fn is_unit(&self, x: u64) -> bool {
        gcd(x % self.q, self.q) == 1
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        inv_mod(a, self.q)
    }

    /// Whether `gcd(t_1, …, t_n, q) = 1`.
    pub fn is_coprime_tuple(&self, tuple: &[u64]) -> bool {
        tuple.iter().fold(self.q, |g, &t| gcd(g, t % self.q)) == 1
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.q)
    }
}

/// Factor `q` by trial division.
pub fn factorize(q: u64) -> Result<Modulus> {
    if q < 2 {
        return Err(Error::InvalidModulus {
            q,
            reason: "modulus must be at least 2",
        });
    }
    let mut factors = Vec::new();
    let mut n = q;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factors.push((n, 1));
    }
    Ok(Modulus { q, factors })
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).map(|m| m.is_prime()).unwrap_or(false)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `q`, or `None` when `gcd(a, q) > 1`.
pub fn inv_mod(a: u64, q: u64) -> Option<u64> {
    let (mut r0, mut r1) = (q as i128, (a % q) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(q as i128) as u64)
}

/// Jordan totient `J_k(n) = n^k ∏_{p | n} (1 - p^{-k})`, exact.
///
/// Defined for every `n >= 1` (`J_k(1) = 1`). Panics on `u128` overflow, far
/// beyond desk-scale parameters.
pub fn jordan_totient(k: u32, n: u64) -> u128 {
    assert!(k >= 1, "jordan totient needs k >= 1");
    if n == 1 {
        return 1;
    }
    let m = factorize(n).expect("n >= 2");
    m.factors()
        .iter()
        .map(|&(p, e)| {
            let pk = (p as u128).checked_pow(k).expect("J_k overflow");
            let head = (p as u128).checked_pow(k * (e - 1)).expect("J_k overflow");
            head.checked_mul(pk - 1).expect("J_k overflow")
        })
        .try_fold(1u128, |acc, x| acc.checked_mul(x))
        .expect("J_k overflow")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_is_prime(n: u64) -> bool {
        n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn factorize_examples() {
        let m = factorize(7).unwrap();
        assert_eq!(m.factors(), &[(7, 1)]);
        assert_eq!(m.least_prime(), 7);

        let m = factorize(12).unwrap();
        assert_eq!(m.factors(), &[(2, 2), (3, 1)]);
        assert_eq!(m.least_prime(), 2);
        assert_eq!(m.tau(), 6);
        assert_eq!(m.omega(), 2);

        assert!(trial_division_is_prime(1009));
        assert_eq!(factorize(1009).unwrap().factors(), &[(1009, 1)]);
    }

    #[test]
    fn factorize_rejects_small() {
        assert!(matches!(factorize(0), Err(Error::InvalidModulus { .. })));
        assert!(matches!(factorize(1), Err(Error::InvalidModulus { .. })));
    }

    #[test]
    fn factorization_multiplies_back() {
        for q in 2..2000u64 {
            let m = factorize(q).unwrap();
            let prod: u64 = m.factors().iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, q);
            assert!(m.factors().windows(2).all(|w| w[0].0 < w[1].0));
            assert!(m.primes().all(trial_division_is_prime));
        }
    }

    fn coprime_tuple_count(k: u32, n: u64) -> u128 {
        // count k-tuples in [1, n]^k jointly coprime with n
        let mut count = 0u128;
        let total = n.pow(k);
        for idx in 0..total {
            let mut g = n;
            let mut r = idx;
            for _ in 0..k {
                g = gcd(g, r % n + 1);
                r /= n;
            }
            if g == 1 {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn jordan_totient_examples() {
        assert_eq!(jordan_totient(2, 1), 1);
        assert_eq!(jordan_totient(2, 6), 24);
        assert_eq!(coprime_tuple_count(2, 6), 24);
        let m3 = Modulus::new(3).unwrap();
        // |SL_2(Z_3)| = 24 by enumerating all 81 matrices
        let sl2 = (0..81u64)
            .filter(|&i| {
                let (a, b, c, d) = (i % 3, i / 3 % 3, i / 9 % 3, i / 27);
                (a * d + 3 * 3 - b * c % 3) % 3 == 1
            })
            .count() as u128;
        assert_eq!(sl2, 24);
        assert_eq!(3 * m3.jordan_totient(2), sl2);
    }

    #[test]
    fn jordan_totient_matches_brute_force() {
        for q in 1..=60u64 {
            for k in 1..=3u32 {
                assert_eq!(jordan_totient(k, q), coprime_tuple_count(k, q), "q={q} k={k}");
            }
        }
    }

    #[test]
    fn inverse_examples() {
        for q in [2u64, 7, 12, 101] {
            assert_eq!(inv_mod(1, q), Some(1 % q));
        }
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 6), None);
        for q in 2..200u64 {
            for a in 0..q {
                match inv_mod(a, q) {
                    Some(b) => assert_eq!(mul_mod(a, b, q), 1 % q),
                    None => assert_ne!(gcd(a, q), 1),
                }
            }
        }
    }

    #[test]
    fn coprime_tuples() {
        let m = Modulus::new(12).unwrap();
        assert!(m.is_coprime_tuple(&[4, 3]));
        assert!(!m.is_coprime_tuple(&[4, 6]));
        assert!(!m.is_coprime_tuple(&[0, 0]));
    }
}
