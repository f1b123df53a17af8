use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

use super::Matrix;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order with orthonormal eigenvectors stored as
/// the columns of `vectors`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition<T> {
    pub values: Vec<T>,
    pub vectors: Matrix<T>,
    pub sweeps: usize,
    /// Off-diagonal Frobenius norm at termination.
    pub off_norm: T,
    /// `‖M - U Λ Uᵀ‖_max`.
    pub residual: T,
}

fn off_frobenius<T: Scalar>(a: &Matrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi eigensolver for a symmetric matrix.
///
/// Sweeps until the off-diagonal Frobenius norm drops below `1e-10` (or a
/// few ulps of `‖M‖_F` for types coarser than `f64`).
pub fn eig_symmetric<T: Scalar>(m: &Matrix<T>) -> Result<EigenDecomposition<T>> {
    let scale = m.max_abs().max(T::one());
    if !m.is_symmetric(T::epsilon() * scale * T::of(8.0)) {
        return Err(invalid("eig_symmetric needs a symmetric matrix; use singular_values"));
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut v = Matrix::<T>::identity(n);
    let frob = m.as_slice().iter().map(|&x| x * x).sum::<T>().sqrt();
    let tol = T::of(1e-10).max(T::epsilon() * frob * T::of(64.0));
    let mut sweeps = 0;
    let mut off = off_frobenius(&a);
    while off >= tol {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Structure(format!(
                "Jacobi did not converge after {MAX_SWEEPS} sweeps (off-diagonal norm {off:e})"
            )));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (T::of(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        off = off_frobenius(&a);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].partial_cmp(&a[(i, i)]).unwrap_or(std::cmp::Ordering::Equal));
    let values: Vec<T> = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    let residual = reconstruction_error(m, &values, &vectors);
    let limit = T::of(1e-8).max(T::epsilon().sqrt() * scale);
    if residual > limit {
        return Err(Error::Structure(format!(
            "eigen reconstruction error {residual:e} exceeds {limit:e}"
        )));
    }
    Ok(EigenDecomposition {
        values,
        vectors,
        sweeps,
        off_norm: off,
        residual,
    })
}

fn reconstruction_error<T: Scalar>(m: &Matrix<T>, values: &[T], u: &Matrix<T>) -> T {
    let n = m.rows();
    let mut worst = T::zero();
    for i in 0..n {
        for j in 0..n {
            let r: T = (0..n).map(|k| u[(i, k)] * values[k] * u[(j, k)]).sum();
            worst = worst.max((m[(i, j)] - r).abs());
        }
    }
    worst
}

/// Singular values in descending order, via the smaller of `M Mᵀ` and `Mᵀ M`.
pub fn singular_values<T: Scalar>(m: &Matrix<T>) -> Result<Vec<T>> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(Vec::new());
    }
    let g = if m.rows() <= m.cols() {
        m.gram()
    } else {
        m.transpose().gram()
    };
    let e = eig_symmetric(&g)?;
    Ok(e.values.into_iter().map(|x| x.max(T::zero()).sqrt()).collect())
}
