use rand::Rng;
use zq_incidence::charsums::{intersection_char_sum, IntersectionSum, IntersectionVariant};
use zq_incidence::setops::is_direct_sum;
use zq_incidence::zaremba::{interval_union, zaremba_set};
use zq_incidence::{Character, Modulus, PointSet};

use super::{character, modulus, prime, run_jobs, trial_grid};
use crate::config::Config;
use crate::error::{config_err, Result};
use crate::record::{col, Column, Kind::*, Row};
use crate::sampling::sample_subset;

pub const KEYS: &[&str] = &[
    "moduli",
    "chi",
    "set",
    "variant",
    "max_quotient",
    "interval",
    "shifts",
    "size",
];

pub const COLUMNS: &[Column] = &[
    col("trial", Int, "trial index within p"),
    col("p", Int, "prime modulus"),
    col("chi_index", Int, "character exponent"),
    col("set", Text, "zaremba, interval or random"),
    col(
        "variant",
        Text,
        "multiplicative: A cap A^-1, shifted: A^-1 cap (A^-1 + 1)",
    ),
    col("size_a", Int, "|A|"),
    col("intersection", Int, "size of the intersection"),
    col("expected_size", Float, "|A|^2 / p"),
    col("abs_sum", Float, "|sum of chi over the intersection|"),
    col("cancellation_ratio", Float, "abs_sum / intersection"),
    col("sqrt_ratio", Float, "abs_sum / sqrt(intersection)"),
];

const SHIFT_ATTEMPTS: usize = 1000;

/// `[N] ∔ Λ` for random `Λ`, redrawn until the sum is direct.
fn random_interval_union<R: Rng>(rng: &mut R, m: &Modulus, n: u64, shifts: usize) -> Result<PointSet> {
    let field = PointSet::full(m.clone(), 1);
    let interval = PointSet::from_residues(m.clone(), 1..=n);
    for _ in 0..SHIFT_ATTEMPTS {
        let lambda = sample_subset(rng, &field, shifts)?;
        if is_direct_sum(&interval, &lambda)? {
            return Ok(interval_union(&lambda, n)?.set);
        }
    }
    Err(config_err(format!(
        "no direct sum [{n}] + {shifts} shifts found mod {}",
        m.q()
    )))
}

fn without_zero(a: &PointSet) -> PointSet {
    a.filter(|x| x[0] != 0)
}

pub fn run(cfg: &Config) -> Result<Vec<Row>> {
    let moduli = cfg.get_list::<u64>("moduli", &[1009])?;
    for &p in &moduli {
        prime(p)?;
    }
    let source = cfg.get_str("set", "zaremba");
    if !["zaremba", "interval", "random"].contains(&source) {
        return Err(config_err(format!(
            "set: expected zaremba, interval or random, got {source:?}"
        )));
    }
    let (variant, variant_name) = match cfg.get_str("variant", "multiplicative") {
        "multiplicative" => (IntersectionVariant::Multiplicative, "multiplicative"),
        "shifted" => (IntersectionVariant::Shifted, "shifted"),
        other => {
            return Err(config_err(format!(
                "variant: expected multiplicative or shifted, got {other:?}"
            )))
        }
    };
    let bound = cfg.get("max_quotient", 5u64)?;
    let n = cfg.get("interval", 10u64)?;
    let shifts = cfg.get("shifts", 10usize)?;
    let jobs = trial_grid(cfg, &moduli);
    run_jobs(cfg, &jobs, |rng, &(p, t)| {
        let chi: Character = character(cfg, rng, p)?;
        let m = modulus(p)?;
        let a = match source {
            "zaremba" => zaremba_set(p, bound)?,
            "interval" => random_interval_union(rng, &m, n, shifts)?,
            _ => {
                let units = PointSet::full(m.clone(), 1).filter(|x| x[0] != 0);
                let s = cfg.get("size", ((p as f64).powf(0.75) as usize).max(1))?;
                sample_subset(rng, &units, s)?
            }
        };
        let a = without_zero(&a);
        let r: IntersectionSum<f64> = intersection_char_sum(&chi, &a, variant)?;
        let abs = r.value.norm();
        let sqrt_ratio = if r.size == 0 { 0.0 } else { abs / (r.size as f64).sqrt() };
        Ok(Row::new()
            .uint("trial", t)
            .int("p", p)
            .int("chi_index", chi.index())
            .text("set", source)
            .text("variant", variant_name)
            .uint("size_a", a.len())
            .uint("intersection", r.size)
            .float("expected_size", r.expected_size)
            .float("abs_sum", abs)
            .float("cancellation_ratio", r.cancellation_ratio())
            .float("sqrt_ratio", sqrt_ratio))
    })
}
