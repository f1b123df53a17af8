//! Multiplicative character sums: twisted Kloosterman sums and bilinear
//! forms, hyperbola sums, sums twisted by a family of `GL_2(F_p)` elements,
//! and energies of such families.

mod energy;
mod kloosterman;
mod twisted;

pub use energy::{energy_t2k, gl2_order, prop_rhs, Energy, DEFAULT_ENERGY_CAP};
pub use kloosterman::{bilinear_form, fourier_lp_norm, kloosterman, BilinearForm, KloostermanTable};
pub use twisted::{
    group_twisted_sum, hyperbola_matrix, hyperbola_sum, intersection_char_sum, projective_lift_check, HyperbolaSum,
    IntersectionSum, IntersectionVariant, LiftCheck,
};

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::modring::{Mat2, Modulus};
use crate::scalar::Scalar;
use crate::setops::PointSet;

/// Duplicate-free set of invertible `2 × 2` matrices over `F_p`, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFamily {
    p: u64,
    elements: Vec<Mat2>,
}

impl MatrixFamily {
    pub fn new(p: u64, elements: impl IntoIterator<Item = Mat2>) -> Result<Self> {
        let m = Modulus::new(p)?;
        if !m.is_prime() {
            return Err(Error::InvalidModulus {
                q: p,
                reason: "matrix families live over a prime field",
            });
        }
        let mut elements: Vec<Mat2> = elements.into_iter().map(|g| Mat2::new(g.a, g.b, g.c, g.d, p)).collect();
        if let Some(g) = elements.iter().find(|g| g.det(p) == 0) {
            return Err(invalid(format!("matrix {g:?} is singular mod {p}")));
        }
        elements.sort_unstable();
        elements.dedup();
        Ok(Self { p, elements })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn contains(&self, g: &Mat2) -> bool {
        self.elements.binary_search(g).is_ok()
    }
}

/// Subset of `Z_q` with complex weights in the closed unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSet<T> {
    base: PointSet,
    weights: Vec<Complex<T>>,
}

impl<T: Scalar> WeightedSet<T> {
    /// `weights[i]` belongs to the `i`-th residue of `base` in sorted order.
    pub fn new(base: PointSet, weights: Vec<Complex<T>>) -> Result<Self> {
        if base.dim() != 1 {
            return Err(invalid("weighted sets are subsets of Z_q"));
        }
        if weights.len() != base.len() {
            return Err(invalid(format!(
                "{} weights for {} residues",
                weights.len(),
                base.len()
            )));
        }
        let limit = T::one() + T::of(1e-12);
        for (i, w) in weights.iter().enumerate() {
            if !w.re.is_finite() || !w.im.is_finite() {
                return Err(Error::NonFinite(i));
            }
            if w.norm() > limit {
                return Err(invalid(format!("weight {i} lies outside the unit disk")));
            }
        }
        Ok(Self { base, weights })
    }

    /// All weights equal to one.
    pub fn unit(base: PointSet) -> Result<Self> {
        let n = base.len();
        Self::new(base, vec![Complex::new(T::one(), T::zero()); n])
    }

    /// From `(residue, weight)` pairs; repeated residues are an error.
    pub fn from_pairs(modulus: Modulus, pairs: impl IntoIterator<Item = (u64, Complex<T>)>) -> Result<Self> {
        let q = modulus.q();
        let mut pairs: Vec<(u64, Complex<T>)> = pairs.into_iter().map(|(x, w)| (x % q, w)).collect();
        pairs.sort_by_key(|p| p.0);
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(invalid("repeated residue in weighted set"));
        }
        let base = PointSet::from_residues(modulus, pairs.iter().map(|p| p.0));
        Self::new(base, pairs.into_iter().map(|p| p.1).collect())
    }

    pub fn base(&self) -> &PointSet {
        &self.base
    }

    pub fn q(&self) -> u64 {
        self.base.q()
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn weights(&self) -> &[Complex<T>] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Complex<T>)> + '_ {
        self.base.residues().iter().copied().zip(self.weights.iter().copied())
    }

    pub fn weight(&self, x: u64) -> Option<Complex<T>> {
        self.base.index_of(&[x % self.q()]).map(|i| self.weights[i])
    }

    /// Dense table `x ↦ c(x)`, zero off the support.
    pub fn dense(&self) -> Vec<Complex<T>> {
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.q() as usize];
        for (x, w) in self.iter() {
            out[x as usize] = w;
        }
        out
    }
}

pub(crate) fn require_prime_character(chi_p: u64, q: u64) -> Result<()> {
    if chi_p != q {
        Err(Error::ModulusMismatch { left: chi_p, right: q })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_validation() {
        assert!(MatrixFamily::new(7, [Mat2::new(1, 2, 2, 4, 7)]).is_err());
        assert!(MatrixFamily::new(8, [Mat2::identity()]).is_err());
        let f = MatrixFamily::new(
            5,
            [Mat2::identity(), Mat2::new(6, 0, 0, 1, 5), Mat2::new(0, 1, 1, 0, 5)],
        )
        .unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.contains(&Mat2::new(0, 1, 1, 0, 5)));
    }

    #[test]
    fn weighted_set_validation() {
        let m = Modulus::new(7).unwrap();
        let w = WeightedSet::<f64>::from_pairs(m.clone(), [(5, Complex::new(0.0, 1.0)), (2, Complex::new(0.5, 0.0))])
            .unwrap();
        assert_eq!(w.base().residues(), &[2, 5]);
        assert_eq!(w.weight(5), Some(Complex::new(0.0, 1.0)));
        assert_eq!(w.weight(3), None);
        assert!(WeightedSet::<f64>::from_pairs(m.clone(), [(1, Complex::new(1.0, 1.0))]).is_err());
        assert!(
            WeightedSet::<f64>::from_pairs(m.clone(), [(1, Complex::new(1.0, 0.0)), (8, Complex::new(1.0, 0.0))])
                .is_err()
        );
        let unit = WeightedSet::<f32>::unit(PointSet::from_residues(m, [1, 2, 3])).unwrap();
        assert_eq!(unit.dense()[2], Complex::new(1.0, 0.0));
    }
}
