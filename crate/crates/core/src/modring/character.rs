use std::sync::Arc;

use num_complex::Complex;

use super::{factorize, gcd, pow_mod};
use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Smallest primitive root modulo the prime `p >= 3`.
pub fn primitive_root(p: u64) -> Result<u64> {
    if p < 3 {
        return Err(invalid(format!("primitive_root needs a prime p >= 3, got {p}")));
    }
    let m = factorize(p)?;
    if !m.is_prime() {
        return Err(invalid(format!("{p} is not prime")));
    }
    let order = p - 1;
    let order_primes: Vec<u64> = factorize(order).map(|f| f.primes().collect()).unwrap_or_default();
    (2..p)
        .find(|&g| order_primes.iter().all(|&r| pow_mod(g, order / r, p) != 1))
        .ok_or_else(|| invalid(format!("no primitive root found mod {p}")))
}

/// Discrete logarithm table `x -> log_g x` for `x in F_p^*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DlogTable {
    p: u64,
    generator: u64,
    // index 0 is unused; 0 has no logarithm
    logs: Vec<u32>,
}

impl DlogTable {
    pub fn new(p: u64, generator: u64) -> Result<Self> {
        if p < 3 || !factorize(p)?.is_prime() {
            return Err(invalid(format!("dlog table needs an odd prime, got {p}")));
        }
        let mut logs = vec![u32::MAX; p as usize];
        let mut x = 1u64;
        for e in 0..p - 1 {
            if logs[x as usize] != u32::MAX {
                return Err(invalid(format!("{generator} is not a primitive root mod {p}")));
            }
            logs[x as usize] = e as u32;
            x = x * generator % p;
        }
        Ok(Self { p, generator, logs })
    }

    pub fn for_prime(p: u64) -> Result<Self> {
        Self::new(p, primitive_root(p)?)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// `log_g x`, or `None` for `x ≡ 0`.
    #[inline]
    pub fn log(&self, x: u64) -> Option<u64> {
        let x = x % self.p;
        (x != 0).then(|| u64::from(self.logs[x as usize]))
    }
}

/// Multiplicative character `χ_k(g^e) = exp(2πi·k·e/(p-1))` with `χ(0) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    table: Arc<DlogTable>,
    index: u64,
}

impl Character {
    pub fn new(p: u64, index: u64) -> Result<Self> {
        Ok(Self::with_table(Arc::new(DlogTable::for_prime(p)?), index))
    }

    /// Character of the given index sharing an existing logarithm table.
    pub fn with_table(table: Arc<DlogTable>, index: u64) -> Self {
        let index = index % (table.p - 1);
        Self { table, index }
    }

    pub fn principal(p: u64) -> Result<Self> {
        Self::new(p, 0)
    }

    /// The quadratic character (Legendre symbol).
    pub fn legendre(p: u64) -> Result<Self> {
        Self::new(p, (p - 1) / 2)
    }

    /// All `p - 1` characters mod `p`, indices `0..p-1`.
    pub fn all(p: u64) -> Result<Vec<Self>> {
        let table = Arc::new(DlogTable::for_prime(p)?);
        Ok((0..p - 1).map(|k| Self::with_table(table.clone(), k)).collect())
    }

    pub fn p(&self) -> u64 {
        self.table.p
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn generator(&self) -> u64 {
        self.table.generator
    }

    pub fn table(&self) -> &Arc<DlogTable> {
        &self.table
    }

    pub fn order(&self) -> u64 {
        let n = self.p() - 1;
        n / gcd(self.index, n)
    }

    pub fn is_principal(&self) -> bool {
        self.index == 0
    }

    pub fn conj(&self) -> Self {
        let n = self.p() - 1;
        Self::with_table(self.table.clone(), (n - self.index) % n)
    }

    /// Exponent `k·log_g x mod (p-1)`, i.e. `χ(x) = ζ_{p-1}^e`.
    #[inline]
    pub fn exponent(&self, x: u64) -> Option<u64> {
        let n = self.p() - 1;
        self.table
            .log(x)
            .map(|e| ((self.index as u128 * e as u128) % n as u128) as u64)
    }

    pub fn eval<T: Scalar>(&self, x: u64) -> Complex<T> {
        match self.exponent(x) {
            None => Complex::new(T::zero(), T::zero()),
            Some(e) => {
                let angle = T::TAU() * T::of_u64(e) / T::of_u64(self.p() - 1);
                Complex::from_polar(T::one(), angle)
            }
        }
    }

    /// Values `χ(0), χ(1), …, χ(p-1)`.
    pub fn values<T: Scalar>(&self) -> Vec<Complex<T>> {
        let n = self.p() - 1;
        let roots: Vec<Complex<T>> = (0..n)
            .map(|e| Complex::from_polar(T::one(), T::TAU() * T::of_u64(e) / T::of_u64(n)))
            .collect();
        (0..self.p())
            .map(|x| match self.exponent(x) {
                None => Complex::new(T::zero(), T::zero()),
                Some(e) => roots[e as usize],
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modring::is_prime;

    #[test]
    fn primitive_root_and_table() {
        assert_eq!(primitive_root(7).unwrap(), 3);
        let t = DlogTable::new(7, 3).unwrap();
        assert_eq!(t.log(1), Some(0));
        assert_eq!(t.log(2), Some(2));
        assert_eq!(t.log(6), Some(3));
        assert_eq!(t.log(0), None);
        for p in (3..500).filter(|&p| is_prime(p)) {
            let t = DlogTable::for_prime(p).unwrap();
            for x in 1..p {
                assert_eq!(pow_mod(t.generator(), t.log(x).unwrap(), p), x);
            }
        }
    }

    #[test]
    fn primitive_root_rejects_composites() {
        assert!(primitive_root(9).is_err());
        assert!(primitive_root(2).is_err());
        assert!(DlogTable::new(7, 2).is_err());
    }

    #[test]
    fn character_examples() {
        let principal = Character::principal(7).unwrap();
        assert_eq!(principal.eval::<f64>(5), Complex::new(1.0, 0.0));
        assert_eq!(principal.eval::<f64>(0), Complex::new(0.0, 0.0));

        let legendre = Character::legendre(7).unwrap();
        let v = legendre.eval::<f64>(3);
        assert!((v - Complex::new(-1.0, 0.0)).norm() < 1e-12);
        for r in [1u64, 2, 4] {
            assert!((legendre.eval::<f64>(r) - Complex::new(1.0, 0.0)).norm() < 1e-12);
        }
        assert_eq!(legendre.order(), 2);

        for chi in Character::all(11).unwrap().into_iter().skip(1) {
            let s: Complex<f64> = (1..11).map(|x| chi.eval::<f64>(x)).sum();
            assert!(s.norm() < 1e-12);
        }
    }

    #[test]
    fn characters_are_multiplicative() {
        for p in (3..=97).filter(|&p| is_prime(p)) {
            for chi in Character::all(p).unwrap() {
                let vals = chi.values::<f64>();
                for x in 1..p {
                    assert!((vals[x as usize].norm() - 1.0).abs() < 1e-12);
                    for y in 1..p {
                        let lhs = vals[(x * y % p) as usize];
                        let rhs = vals[x as usize] * vals[y as usize];
                        assert!((lhs - rhs).norm() < 1e-10, "p={p} k={} x={x} y={y}", chi.index());
                    }
                }
            }
        }
    }

    #[test]
    fn conj_inverts() {
        let chi = Character::new(13, 5).unwrap();
        let c = chi.conj();
        for x in 1..13 {
            let z = chi.eval::<f64>(x) * c.eval::<f64>(x);
            assert!((z - Complex::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn single_precision_eval() {
        let chi = Character::legendre(11).unwrap();
        let v: Complex<f32> = chi.eval(2);
        assert!((v.re + 1.0).abs() < 1e-5);
    }
}
