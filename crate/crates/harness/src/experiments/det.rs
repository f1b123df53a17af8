use zq_incidence::incidence::{
    check_inequality, closed_form_tuple_count, det_main_terms, independent_tuple_count, rank_mod_p, DetNormalization,
    IncidenceInstance,
};
use zq_incidence::PointSet;

use super::{modulus, prime, run_jobs, size, trial_grid};
use crate::config::Config;
use crate::error::{config_err, Result};
use crate::record::{col, Column, Kind::*, Row};
use crate::sampling::{random_unit, sample_subset};

pub const KEYS: &[&str] = &["moduli", "n", "m", "size_a", "size_b", "lambda"];

pub const COLUMNS: &[Column] = &[
    col("trial", Int, "trial index within q"),
    col("q", Int, "odd prime modulus"),
    col("n", Int, "vectors per element of A"),
    col("m", Int, "vectors per element of B"),
    col("lambda", Int, "target determinant, nonzero"),
    col("size_a", Int, "|A|, independent n-tuples of F_q^(n+m)"),
    col("size_b", Int, "|B|, independent m-tuples of F_q^(n+m)"),
    col("count", Int, "#{(a,b): det(a,b) = lambda}"),
    col("main_over_q", Rational, "|A||B|/q"),
    col("main_over_q_minus_1", Rational, "|A||B|/(q-1)"),
    col("closer", Text, "main term nearer the count: q or q-1"),
    col("error_lhs", Rational, "|count - |A||B|/q| / 8"),
    col("bound_rhs", Float, "q^(d^2/2-d/4-3/4) sqrt(|A||B|) + |A||B|/q^2"),
    col("slack", Float, "bound_rhs / error_lhs"),
    col("tuples_closed_form", Rational, "q^(dn) prod_(j<=n) (1-q^-j)"),
    col("tuples_exact", Int, "number of independent n-tuples in F_q^d"),
];

const TUPLE_CAP: f64 = 1e6;

/// Flattened `k`-tuples of `F_p^d` of full rank.
fn independent_tuples(q: u64, d: usize, k: usize) -> Result<PointSet> {
    let full = PointSet::full(modulus(q)?, d * k);
    Ok(full.filter(|x| rank_mod_p(x, k, d, q) == k))
}

pub fn run(cfg: &Config) -> Result<Vec<Row>> {
    let moduli = cfg.get_list::<u64>("moduli", &[3, 5])?;
    let (n, m) = (cfg.get("n", 1usize)?, cfg.get("m", 1usize)?);
    if n == 0 || m == 0 {
        return Err(config_err("n and m must be positive"));
    }
    let d = n + m;
    for &q in &moduli {
        prime(q)?;
        if (q as f64).powi((d * n.max(m)) as i32) > TUPLE_CAP {
            return Err(config_err(format!("q = {q} with d = {d} exceeds the enumeration cap")));
        }
    }
    let jobs = trial_grid(cfg, &moduli);
    run_jobs(cfg, &jobs, |rng, &(q, t)| {
        let md = modulus(q)?;
        let dom_a = independent_tuples(q, d, n)?;
        let dom_b = if m == n {
            dom_a.clone()
        } else {
            independent_tuples(q, d, m)?
        };
        let lambda = match cfg.get_opt::<u64>("lambda")? {
            Some(l) => l,
            None => random_unit(rng, &md),
        };
        let sa = size(cfg, rng, "size_a", dom_a.len())?;
        let sb = size(cfg, rng, "size_b", dom_b.len())?;
        let a = sample_subset(rng, &dom_a, sa)?;
        let b = sample_subset(rng, &dom_b, sb)?;
        let r = check_inequality(&IncidenceInstance::det(a, b, lambda, n, m)?)?;
        let terms = det_main_terms(sa as u64, sb as u64, q);
        let closer = match terms.closer(r.count) {
            DetNormalization::OverQ => "q",
            DetNormalization::OverQMinus1 => "q-1",
        };
        Ok(Row::new()
            .uint("trial", t)
            .int("q", q)
            .uint("n", n)
            .uint("m", m)
            .int("lambda", lambda % q)
            .uint("size_a", sa)
            .uint("size_b", sb)
            .int("count", r.count)
            .rational("main_over_q", terms.over_q)
            .rational("main_over_q_minus_1", terms.over_q_minus_1)
            .text("closer", closer)
            .rational("error_lhs", r.error_lhs.clone())
            .float("bound_rhs", r.bound_rhs)
            .float("slack", r.slack)
            .rational("tuples_closed_form", closed_form_tuple_count(q, d, n))
            .int(
                "tuples_exact",
                i128::try_from(independent_tuple_count(q, d, n)).unwrap_or(i128::MAX),
            )
            .check(r.holds()))
    })
}
