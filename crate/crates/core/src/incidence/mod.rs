//! Incidence counters for dot-product, determinant and cross-ratio
//! equations over `Z_q`, with exact main terms and the matching theorem
//! right-hand sides.

mod cross_ratio;
mod det;
mod dot;

pub use cross_ratio::{
    count_crossratio, cross_ratio, crossratio_bound_rhs, crossratio_pair_caps, crossratio_pair_solutions,
    is_degenerate_pair, PairCapReport,
};
pub use det::{
    closed_form_tuple_count, count_det, det_bound_rhs, det_main_terms, determinant_mod_p, independent_tuple_count,
    rank_mod_p, DetMainTerms, DetNormalization,
};
pub use dot::{
    count_dot, count_dot_via_characters, dot_bound_rhs, dot_hypothesis_warning, dot_main_term, dot_product_mod, n_star,
    theta, vinh_rhs, CharacterCount,
};

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::modring::Modulus;
use crate::setops::PointSet;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IncidenceKind {
    /// `a_1 b_1 + … + a_n b_n ≡ λ` with `A, B ⊆ Z_q^n`.
    Dot { n: usize },
    /// `det(a_1, …, a_n, b_1, …, b_m) ≡ λ` over `Z_q^d`, `d = n + m`.
    Det { n: usize, m: usize },
    /// `[a_1, a_2, b_1, b_2] ≡ λ` with `A, B ⊆ Z_q^2`.
    CrossRatio,
}

impl IncidenceKind {
    pub fn name(&self) -> &'static str {
        match self {
            IncidenceKind::Dot { .. } => "dot",
            IncidenceKind::Det { .. } => "det",
            IncidenceKind::CrossRatio => "crossratio",
        }
    }

    /// Coordinates per element of `A` and of `B`.
    pub fn dims(&self) -> (usize, usize) {
        match *self {
            IncidenceKind::Dot { n } => (n, n),
            IncidenceKind::Det { n, m } => (n * (n + m), m * (n + m)),
            IncidenceKind::CrossRatio => (2, 2),
        }
    }
}

/// A validated incidence problem: kind, modulus, `λ` and the two families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceInstance {
    kind: IncidenceKind,
    lambda: u64,
    a: PointSet,
    b: PointSet,
}

impl IncidenceInstance {
    /// Dot-product instance. Tuples must be coprime to `q` and `λ` a unit.
    pub fn dot(a: PointSet, b: PointSet, lambda: u64) -> Result<Self> {
        check_same(&a, &b)?;
        let n = a.dim();
        if n < 2 {
            return Err(crate::error::invalid("dot instances need n >= 2"));
        }
        let m = a.modulus();
        if !m.is_unit(lambda) {
            return Err(Error::InvalidLambda {
                lambda,
                q: m.q(),
                reason: "lambda must be a unit",
            });
        }
        a.require_coprime_tuples()?;
        b.require_coprime_tuples()?;
        let lambda = lambda % m.q();
        Ok(Self {
            kind: IncidenceKind::Dot { n },
            lambda,
            a,
            b,
        })
    }

    /// Determinant instance: elements of `A` are `n` vectors of `Z_q^d`
    /// flattened into `n·d` coordinates, elements of `B` are `m` vectors.
    pub fn det(a: PointSet, b: PointSet, lambda: u64, n: usize, m: usize) -> Result<Self> {
        if a.q() != b.q() {
            return Err(Error::ModulusMismatch {
                left: a.q(),
                right: b.q(),
            });
        }
        det::validate(a.modulus(), lambda)?;
        let kind = IncidenceKind::Det { n, m };
        let (da, db) = kind.dims();
        if n == 0 || m == 0 || a.dim() != da || b.dim() != db {
            return Err(crate::error::invalid(format!(
                "det instance with n={n}, m={m} needs dimensions {da} and {db}, got {} and {}",
                a.dim(),
                b.dim()
            )));
        }
        Ok(Self {
            kind,
            lambda: lambda % a.q(),
            a,
            b,
        })
    }

    pub fn cross_ratio(a: PointSet, b: PointSet, lambda: u64) -> Result<Self> {
        check_same(&a, &b)?;
        cross_ratio::validate(a.modulus(), lambda)?;
        if a.dim() != 2 {
            return Err(crate::error::invalid("cross-ratio instances live in Z_q^2"));
        }
        Ok(Self {
            kind: IncidenceKind::CrossRatio,
            lambda: lambda % a.q(),
            a,
            b,
        })
    }

    pub fn kind(&self) -> IncidenceKind {
        self.kind
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    pub fn modulus(&self) -> &Modulus {
        self.a.modulus()
    }

    pub fn a(&self) -> &PointSet {
        &self.a
    }

    pub fn b(&self) -> &PointSet {
        &self.b
    }

    pub fn count(&self) -> Result<u64> {
        match self.kind {
            IncidenceKind::Dot { .. } => count_dot(&self.a, &self.b, self.lambda),
            IncidenceKind::Det { n, m } => count_det(&self.a, &self.b, self.lambda, n, m),
            IncidenceKind::CrossRatio => count_crossratio(&self.a, &self.b, self.lambda),
        }
    }
}

fn check_same(a: &PointSet, b: &PointSet) -> Result<()> {
    if a.q() != b.q() {
        return Err(Error::ModulusMismatch {
            left: a.q(),
            right: b.q(),
        });
    }
    if a.dim() != b.dim() {
        return Err(crate::error::invalid("A and B must have the same dimension"));
    }
    Ok(())
}

/// Measured count against a theorem's main term and bound.
#[derive(Debug, Clone, PartialEq)]
pub struct SlackReport {
    pub kind: IncidenceKind,
    pub count: u64,
    pub main_term: Rational,
    /// Left-hand side of the inequality, including any leading factor.
    pub error_lhs: Rational,
    pub bound_rhs: f64,
    /// `bound_rhs / error_lhs`; `+∞` when the left-hand side is exactly zero.
    pub slack: f64,
    /// Determinant instances only: the `|A||B|/(q-1)` normalization.
    pub alternate_main_term: Option<Rational>,
    pub warnings: Vec<String>,
}

impl SlackReport {
    pub fn holds(&self) -> bool {
        self.slack >= 1.0
    }
}

pub fn slack_ratio(error_lhs: &Rational, bound_rhs: f64) -> f64 {
    if error_lhs.is_zero() {
        f64::INFINITY
    } else {
        bound_rhs / error_lhs.to_f64().unwrap_or(f64::INFINITY)
    }
}

/// Count the instance and evaluate its theorem inequality.
pub fn check_inequality(instance: &IncidenceInstance) -> Result<SlackReport> {
    let count = instance.count()?;
    let (sa, sb) = (instance.a.len() as u64, instance.b.len() as u64);
    let m = instance.modulus();
    let count_r = Rational::from_integer(count.into());
    let mut warnings = Vec::new();
    let (main_term, error_lhs, bound_rhs, alternate) = match instance.kind {
        IncidenceKind::Dot { n } => {
            warnings.extend(dot_hypothesis_warning(m));
            let main = dot_main_term(sa, sb, m, n);
            let lhs = (&count_r - &main).abs();
            (main, lhs, dot_bound_rhs(m, n, sa, sb)?, None)
        }
        IncidenceKind::Det { n, m: mm } => {
            let terms = det_main_terms(sa, sb, m.q());
            let lhs = (&count_r - &terms.over_q).abs() / Rational::from_integer(8.into());
            let rhs = det_bound_rhs(m.q(), n + mm, sa, sb);
            (terms.over_q, lhs, rhs, Some(terms.over_q_minus_1))
        }
        IncidenceKind::CrossRatio => {
            let main = Rational::new((sa * sb).into(), m.q().into());
            let lhs = (&count_r - &main).abs();
            (main, lhs, crossratio_bound_rhs(m.q(), sa, sb), None)
        }
    };
    Ok(SlackReport {
        kind: instance.kind,
        count,
        slack: slack_ratio(&error_lhs, bound_rhs),
        main_term,
        error_lhs,
        bound_rhs,
        alternate_main_term: alternate,
        warnings,
    })
}
