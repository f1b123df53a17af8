use zq_incidence::incidence::{check_inequality, theta, vinh_rhs, IncidenceInstance};
use zq_incidence::PointSet;

use super::{modulus, run_jobs, size, trial_grid};
use crate::config::Config;
use crate::error::{config_err, Result};
use crate::record::{col, Column, Kind::*, Row};
use crate::sampling::{random_unit, sample_subset};

pub const KEYS: &[&str] = &["moduli", "n", "size_a", "size_b", "lambda"];

pub const COLUMNS: &[Column] = &[
    col("trial", Int, "trial index within (q, n)"),
    col("q", Int, "modulus"),
    col("n", Int, "dimension"),
    col("lambda", Int, "target dot product, a unit"),
    col("size_a", Int, "|A|, coprime n-tuples"),
    col("size_b", Int, "|B|, coprime n-tuples"),
    col("count", Int, "#{(a,b): a.b = lambda}"),
    col("main_term", Rational, "|A||B| q^(n-1) / J_n(q)"),
    col("theta", Rational, "exact Theta(n)"),
    col("error_lhs", Rational, "|count - main_term|"),
    col("bound_rhs", Float, "2 q^(n-1) sqrt(|A||B|) (Theta m^-n*)^(1/4)"),
    col("slack", Float, "bound_rhs / error_lhs, inf when the error is 0"),
    col("vinh_rhs", Float, "comparison column sqrt(q|A||B|)"),
    col("hypothesis_ok", Bool, "least prime divisor of q is at least 5"),
];

pub fn run(cfg: &Config) -> Result<Vec<Row>> {
    let moduli = cfg.get_list::<u64>("moduli", &[5, 7, 9, 11, 15])?;
    let dims = cfg.get_list::<usize>("n", &[2, 3])?;
    if dims.iter().any(|&n| n < 2) {
        return Err(config_err("n must be at least 2"));
    }
    let jobs: Vec<(u64, usize, usize)> = trial_grid(cfg, &moduli)
        .into_iter()
        .flat_map(|(q, t)| dims.iter().map(move |&n| (q, n, t)))
        .collect();
    run_jobs(cfg, &jobs, |rng, &(q, n, t)| {
        let m = modulus(q)?;
        let dom = PointSet::coprime_tuples(m.clone(), n);
        let lambda = match cfg.get_opt::<u64>("lambda")? {
            Some(l) => l,
            None => random_unit(rng, &m),
        };
        let sa = size(cfg, rng, "size_a", dom.len())?;
        let sb = size(cfg, rng, "size_b", dom.len())?;
        let a = sample_subset(rng, &dom, sa)?;
        let b = sample_subset(rng, &dom, sb)?;
        let r = check_inequality(&IncidenceInstance::dot(a, b, lambda)?)?;
        Ok(Row::new()
            .uint("trial", t)
            .int("q", q)
            .uint("n", n)
            .int("lambda", lambda % q)
            .uint("size_a", sa)
            .uint("size_b", sb)
            .int("count", r.count)
            .rational("main_term", r.main_term.clone())
            .rational("theta", theta(&m, n)?)
            .rational("error_lhs", r.error_lhs.clone())
            .float("bound_rhs", r.bound_rhs)
            .float("slack", r.slack)
            .float("vinh_rhs", vinh_rhs(q, sa as u64, sb as u64))
            .boolean("hypothesis_ok", r.warnings.is_empty())
            .check(r.holds()))
    })
}
