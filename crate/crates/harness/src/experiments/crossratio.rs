use std::collections::BTreeMap;

use rand::Rng;
use zq_incidence::incidence::{check_inequality, crossratio_pair_caps, IncidenceInstance, PairCapReport};
use zq_incidence::PointSet;

use super::{modulus, prime, run_jobs, size, trial_grid};
use crate::config::Config;
use crate::error::{config_err, Result};
use crate::record::{col, Column, Kind::*, Row};
use crate::sampling::sample_subset;

pub const KEYS: &[&str] = &["moduli", "size_a", "size_b", "lambda", "pair_caps"];

/// Largest q for which the exhaustive pair caps are computed.
const CAP_LIMIT: u64 = 31;

pub const COLUMNS: &[Column] = &[
    col("trial", Int, "trial index within q"),
    col("q", Int, "prime modulus"),
    col("lambda", Int, "target cross-ratio, not 0 or 1"),
    col("size_a", Int, "|A| in Z_q^2"),
    col("size_b", Int, "|B| in Z_q^2"),
    col("count", Int, "#{(a,b): [a1,b1,a2,b2] = lambda}"),
    col("main_term", Rational, "|A||B|/q"),
    col("error_lhs", Rational, "|count - |A||B|/q|"),
    col("bound_rhs", Float, "4 q^(3/4) sqrt(|A||B|)"),
    col("slack", Float, "bound_rhs / error_lhs"),
    col(
        "cap_nondegenerate",
        Int,
        "max common solutions of a non-degenerate pair over Z_q^2, -1 if skipped",
    ),
    col(
        "cap_degenerate",
        Int,
        "max common solutions of a degenerate pair, -1 if skipped",
    ),
    col("caps_ok", Bool, "caps at most 4 and 2q, true when skipped"),
];

pub fn run(cfg: &Config) -> Result<Vec<Row>> {
    let moduli = cfg.get_list::<u64>("moduli", &[7, 11])?;
    for &q in &moduli {
        if prime(q)? < 3 {
            return Err(config_err("cross-ratio incidences need q >= 3"));
        }
    }
    let with_caps = cfg.get_bool("pair_caps", true)?;
    let fixed = cfg.get_opt::<u64>("lambda")?;
    let mut caps: BTreeMap<(u64, u64), PairCapReport> = BTreeMap::new();
    if with_caps {
        for &q in moduli.iter().filter(|&&q| q <= CAP_LIMIT) {
            let lambdas: Vec<u64> = match fixed {
                Some(l) => vec![l % q],
                None => (2..q).collect(),
            };
            for l in lambdas {
                caps.insert((q, l), crossratio_pair_caps(q, l)?);
            }
        }
    }
    let jobs = trial_grid(cfg, &moduli);
    run_jobs(cfg, &jobs, |rng, &(q, t)| {
        let dom = PointSet::full(modulus(q)?, 2);
        let lambda = match fixed {
            Some(l) => l % q,
            None => rng.random_range(2..q),
        };
        let sa = size(cfg, rng, "size_a", dom.len())?;
        let sb = size(cfg, rng, "size_b", dom.len())?;
        let a = sample_subset(rng, &dom, sa)?;
        let b = sample_subset(rng, &dom, sb)?;
        let r = check_inequality(&IncidenceInstance::cross_ratio(a, b, lambda)?)?;
        let cap = caps.get(&(q, lambda));
        let caps_ok = cap.is_none_or(PairCapReport::holds);
        Ok(Row::new()
            .uint("trial", t)
            .int("q", q)
            .int("lambda", lambda)
            .uint("size_a", sa)
            .uint("size_b", sb)
            .int("count", r.count)
            .rational("main_term", r.main_term.clone())
            .rational("error_lhs", r.error_lhs.clone())
            .float("bound_rhs", r.bound_rhs)
            .float("slack", r.slack)
            .int("cap_nondegenerate", cap.map_or(-1, |c| c.max_nondegenerate as i128))
            .int("cap_degenerate", cap.map_or(-1, |c| c.max_degenerate as i128))
            .boolean("caps_ok", caps_ok)
            .check(r.holds() && caps_ok))
    })
}
