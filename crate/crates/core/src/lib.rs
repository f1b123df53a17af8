//! Exact incidence counting over `Z_q`, spectral certificates for the
//! counts, multiplicative character sums and Zaremba-set experiments.
//!
//! Counting and main terms are exact (integers and [`Rational`]s). Everything
//! that is inherently floating point (character values, eigenvalues, complex
//! sums) is generic over a [`Scalar`] so the same kernels run in `f32` or
//! `f64`; the aliases below fix `f64` for everyday use.

pub mod charsums;
pub mod error;
pub mod incidence;
pub mod modring;
pub mod scalar;
pub mod setops;
pub mod spectra;
pub mod zaremba;

pub use error::{Error, Result};
pub use modring::{Character, ComplexVector, Modulus};
pub use scalar::Scalar;
pub use setops::PointSet;

/// Exact rational used for main terms, totients and theorem constants.
pub type Rational = num_rational::BigRational;

/// Complex value in double precision.
pub type C64 = num_complex::Complex<f64>;

pub type ComplexVec = modring::ComplexVector<f64>;
pub type DenseMatrix = spectra::Matrix<f64>;
pub type Eigen = spectra::EigenDecomposition<f64>;
pub type Spectrum = spectra::SpectrumReport<f64>;
pub type Weighted = charsums::WeightedSet<f64>;
