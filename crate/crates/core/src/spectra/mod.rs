//! Incidence matrices, their spectra and exact fourth moments, and the
//! group actions that leave them invariant.

mod dense;
mod group;
mod invariance;
mod jacobi;
mod matrix;

pub use dense::Matrix;
pub use group::{enumerate_gl2, enumerate_sl2, DEFAULT_GROUP_CAP};
pub use invariance::{check_invariance, Counterexample, InvarianceReport, LabelAction};
pub use jacobi::{eig_symmetric, singular_values, EigenDecomposition};
pub use matrix::{build_matrix, parse_dump, IncidenceMatrix, MatrixDump, RectangularNorm, DEFAULT_MATRIX_CAP};

use num_traits::ToPrimitive;

use crate::error::Result;
use crate::incidence::theta;
use crate::modring::Modulus;
use crate::scalar::Scalar;

/// A run of eigenvalues merged by [`cluster_multiplicities`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster<T> {
    /// Mean of the merged values.
    pub value: T,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport<T> {
    pub clusters: Vec<Cluster<T>>,
    pub cluster_tol: T,
    pub top_value: T,
    /// `max_{j ≥ 2} |μ_j|`.
    pub second_value: T,
    /// `Σ μ_j⁴` from the floating values.
    pub fourth_moment_float: T,
    pub fourth_moment_exact: Option<u128>,
}

impl<T: Scalar> SpectrumReport<T> {
    pub fn dimension(&self) -> usize {
        self.clusters.iter().map(|c| c.multiplicity).sum()
    }

    /// Multiplicities of every cluster after the first.
    pub fn min_nontop_multiplicity(&self) -> Option<usize> {
        self.clusters.iter().skip(1).map(|c| c.multiplicity).min()
    }

    pub fn with_exact(mut self, exact: u128) -> Self {
        self.fourth_moment_exact = Some(exact);
        self
    }

    /// `|float - exact| / exact`, when the exact value is known and nonzero.
    pub fn fourth_moment_rel_error(&self) -> Option<f64> {
        let exact = self.fourth_moment_exact? as f64;
        if exact == 0.0 {
            return Some(self.fourth_moment_float.as_f64().abs());
        }
        Some((self.fourth_moment_float.as_f64() - exact).abs() / exact)
    }
}

/// Greedy clustering of descending values: neighbours within `tol` merge.
pub fn cluster_multiplicities<T: Scalar>(values: &[T], tol: T) -> SpectrumReport<T> {
    let mut clusters: Vec<(T, usize, T)> = Vec::new();
    for &v in values {
        match clusters.last_mut() {
            Some((sum, count, last)) if (*last - v).abs() <= tol => {
                *sum = *sum + v;
                *count += 1;
                *last = v;
            }
            _ => clusters.push((v, 1, v)),
        }
    }
    let second = values.iter().skip(1).fold(T::zero(), |m, x| m.max(x.abs()));
    SpectrumReport {
        clusters: clusters
            .into_iter()
            .map(|(sum, count, _)| Cluster {
                value: sum / T::of_u64(count as u64),
                multiplicity: count,
            })
            .collect(),
        cluster_tol: tol,
        top_value: values.first().copied().unwrap_or_else(T::zero),
        second_value: second,
        fourth_moment_float: values.iter().map(|&x| x.powi(4)).sum(),
        fourth_moment_exact: None,
    }
}

/// Default tolerance `1e-6 · dim · ‖M‖_max`.
pub fn default_cluster_tol<T: Scalar>(dim: usize) -> T {
    T::of(1e-6) * T::of_u64(dim as u64)
}

/// Spectrum of an incidence matrix: eigenvalues when it is symmetric,
/// singular values otherwise, with the exact fourth moment attached.
pub fn spectrum<T: Scalar>(m: &IncidenceMatrix, tol: Option<T>) -> Result<(Vec<T>, SpectrumReport<T>)> {
    let dense = m.to_matrix::<T>();
    let values = if m.is_symmetric() {
        eig_symmetric(&dense)?.values
    } else {
        singular_values(&dense)?
    };
    let tol = tol.unwrap_or_else(|| default_cluster_tol(m.rows().max(m.cols())));
    let report = cluster_multiplicities(&values, tol).with_exact(m.rectangular_norm().total);
    Ok((values, report))
}

/// `(3 m^{-1} q^{4n-4} Θ(n))^{1/4}`, `m` the least prime divisor of `q`.
pub fn mu2_bound(q: &Modulus, n: usize) -> Result<f64> {
    let th = theta(q, n)?.to_f64().unwrap_or(f64::INFINITY);
    let qf = q.q() as f64;
    Ok((3.0 / q.least_prime() as f64 * qf.powi(4 * n as i32 - 4) * th).powf(0.25))
}

/// `√(MN)/(q-1)` with `M`, `N` the family sizes.
pub fn closed_form_top_singular_value(rows: usize, cols: usize, q: u64) -> f64 {
    (rows as f64 * cols as f64).sqrt() / (q - 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::IncidenceKind;

    fn m(q: u64) -> Modulus {
        Modulus::new(q).unwrap()
    }

    #[test]
    fn clustering_examples() {
        let r = cluster_multiplicities(&[3.0f64, 1.0000001, 1.0], 1e-5);
        assert_eq!(r.clusters.len(), 2);
        assert_eq!((r.clusters[0].value, r.clusters[0].multiplicity), (3.0, 1));
        assert_eq!(r.clusters[1].multiplicity, 2);
        assert!((r.clusters[1].value - 1.0).abs() < 1e-6);
        let r = cluster_multiplicities(&[4.0, 0.0, 0.0, 0.0], 1e-9);
        assert_eq!(
            r.clusters,
            vec![
                Cluster {
                    value: 4.0,
                    multiplicity: 1
                },
                Cluster {
                    value: 0.0,
                    multiplicity: 3
                }
            ]
        );
        assert_eq!(r.dimension(), 4);
        assert_eq!(r.second_value, 0.0);
    }

    #[test]
    fn dot_spectrum_q3() {
        let mat = build_matrix(IncidenceKind::Dot { n: 2 }, &m(3), 1, DEFAULT_MATRIX_CAP).unwrap();
        let e = eig_symmetric(&mat.to_matrix::<f64>()).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-10);
        let c = 1.0 / 8f64.sqrt();
        let sign = e.vectors[(0, 0)].signum();
        assert!((0..8).all(|i| (sign * e.vectors[(i, 0)] - c).abs() < 1e-9));
        let (_, rep) = spectrum::<f64>(&mat, None).unwrap();
        assert!(rep.fourth_moment_rel_error().unwrap() < 1e-6);
    }

    #[test]
    fn det_singular_values() {
        let mat = build_matrix(IncidenceKind::Det { n: 1, m: 1 }, &m(3), 1, DEFAULT_MATRIX_CAP).unwrap();
        let (values, rep) = spectrum::<f64>(&mat, None).unwrap();
        assert_eq!(rep.fourth_moment_exact, Some(120));
        assert!(rep.fourth_moment_rel_error().unwrap() < 1e-6);
        let g = mat.to_matrix::<f64>().gram();
        let top = eig_symmetric(&g).unwrap().values[0].sqrt();
        assert!((values[0] - top).abs() < 1e-9);
        assert!((top - 3.0).abs() < 1e-9);
        assert_eq!(closed_form_top_singular_value(9, 9, 3), 4.5);
    }

    #[test]
    fn mu2_bound_value() {
        let b = mu2_bound(&m(7), 2).unwrap();
        assert!((b - (3.0 / 7.0 * 7f64.powi(4) * 2.0).powf(0.25)).abs() < 1e-12);
    }
}
