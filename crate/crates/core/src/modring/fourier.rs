use std::ops::Index;

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Finite complex vector, e.g. a function `Z_q -> C`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector<T> {
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexVector<T> {
    pub fn new(entries: Vec<Complex<T>>) -> Result<Self> {
        if let Some(i) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { entries })
    }

    pub fn from_real(values: &[T]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            entries: vec![Complex::new(T::zero(), T::zero()); len],
        }
    }

    /// Indicator of `support` inside `Z_len`.
    pub fn indicator(len: usize, support: impl IntoIterator<Item = u64>) -> Self {
        let mut v = Self::zeros(len);
        for x in support {
            v.entries[x as usize % len] = Complex::new(T::one(), T::zero());
        }
        v
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn into_inner(self) -> Vec<Complex<T>> {
        self.entries
    }

    pub fn sum(&self) -> Complex<T> {
        self.entries.iter().copied().sum()
    }

    pub fn norm2(&self) -> T {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn norm1(&self) -> T {
        self.entries.iter().map(|z| z.norm()).sum()
    }
}

impl<T> Index<usize> for ComplexVector<T> {
    type Output = Complex<T>;

    fn index(&self, i: usize) -> &Complex<T> {
        &self.entries[i]
    }
}

/// `e_q(t) = exp(2πi t / q)`, reducing `t` first.
pub fn additive_character<T: Scalar>(t: i64, q: u64) -> Complex<T> {
    let r = t.rem_euclid(q as i64) as u64;
    Complex::from_polar(T::one(), T::TAU() * T::of_u64(r) / T::of_u64(q))
}

fn roots_of_unity<T: Scalar>(q: u64) -> Vec<Complex<T>> {
    (0..q as i64).map(|t| additive_character(t, q)).collect()
}

/// `f̂(t) = Σ_x f(x) e_q(tx)` by direct summation.
pub fn dft<T: Scalar>(f: &ComplexVector<T>) -> ComplexVector<T> {
    transform(f, false)
}

/// Inverse of [`dft`]: `f(x) = q^{-1} Σ_t f̂(t) e_q(-tx)`.
pub fn inverse_dft<T: Scalar>(f: &ComplexVector<T>) -> ComplexVector<T> {
    let mut out = transform(f, true);
    let scale = T::of_u64(f.len() as u64);
    for z in &mut out.entries {
        *z = *z / scale;
    }
    out
}

fn transform<T: Scalar>(f: &ComplexVector<T>, inverse: bool) -> ComplexVector<T> {
    let q = f.len() as u64;
    if q == 0 {
        return ComplexVector::zeros(0);
    }
    let roots = roots_of_unity::<T>(q);
    let entries = (0..q)
        .map(|t| {
            f.entries
                .iter()
                .enumerate()
                .map(|(x, &v)| {
                    let mut e = (t as u128 * x as u128 % q as u128) as u64;
                    if inverse {
                        e = (q - e) % q;
                    }
                    v * roots[e as usize]
                })
                .sum()
        })
        .collect();
    ComplexVector { entries }
}

/// Balanced function `f(x) - (Σ f) / |G|`.
pub fn balanced<T: Scalar>(f: &ComplexVector<T>, group_size: usize) -> Result<ComplexVector<T>> {
    if group_size != f.len() || group_size == 0 {
        return Err(invalid(format!(
            "balanced: group size {group_size} must equal vector length {}",
            f.len()
        )));
    }
    let mean = f.sum() / T::of_u64(group_size as u64);
    ComplexVector::new(f.entries.iter().map(|&z| z - mean).collect())
}
