use rand::Rng;
use zq_incidence::charsums::kloosterman;
use zq_incidence::C64;

use super::{character, prime, run_jobs, trial_grid};
use crate::config::Config;
use crate::error::Result;
use crate::record::{col, Column, Kind::*, Row};

pub const KEYS: &[&str] = &["moduli", "chi", "n", "m"];

pub const COLUMNS: &[Column] = &[
    col("trial", Int, "trial index within p"),
    col("p", Int, "prime modulus"),
    col("chi_index", Int, "character exponent j in chi(g^k) = e(jk/(p-1))"),
    col("principal", Bool, "chi is principal"),
    col("n", Int, "additive frequency of x"),
    col("m", Int, "additive frequency of x^-1"),
    col("re", Float, "real part of K_chi(n,m)"),
    col("im", Float, "imaginary part of K_chi(n,m)"),
    col("abs", Float, "|K_chi(n,m)|"),
    col(
        "expected_abs",
        Float,
        "sqrt(p), 0 or p-1 where a closed form applies, nan otherwise",
    ),
    col("weil_bound", Float, "2 sqrt(p)"),
];

/// `|K_χ(n, m)|` where it is forced: Gauss sums and the `n = m = 0` case.
fn closed_form(p: u64, principal: bool, n: u64, m: u64) -> Option<f64> {
    match (n.is_multiple_of(p), m.is_multiple_of(p)) {
        (true, true) => Some(if principal { (p - 1) as f64 } else { 0.0 }),
        (false, true) | (true, false) if !principal => Some((p as f64).sqrt()),
        (false, true) | (true, false) => Some(1.0),
        _ => None,
    }
}

pub fn run(cfg: &Config) -> Result<Vec<Row>> {
    let moduli = cfg.get_list::<u64>("moduli", &[7, 11, 13, 17])?;
    for &p in &moduli {
        prime(p)?;
    }
    let jobs = trial_grid(cfg, &moduli);
    run_jobs(cfg, &jobs, |rng, &(p, t)| {
        let chi = character(cfg, rng, p)?;
        let n = cfg.get_opt::<u64>("n")?.unwrap_or_else(|| rng.random_range(0..p));
        let m = cfg.get_opt::<u64>("m")?.unwrap_or_else(|| rng.random_range(0..p));
        let k: C64 = kloosterman(&chi, n, m);
        let weil = 2.0 * (p as f64).sqrt();
        let expected = closed_form(p, chi.is_principal(), n, m);
        let ok = match expected {
            Some(e) => (k.norm() - e).abs() < 1e-8,
            None => k.norm() <= weil + 1e-9,
        };
        Ok(Row::new()
            .uint("trial", t)
            .int("p", p)
            .int("chi_index", chi.index())
            .boolean("principal", chi.is_principal())
            .int("n", n % p)
            .int("m", m % p)
            .float("re", k.re)
            .float("im", k.im)
            .float("abs", k.norm())
            .float("expected_abs", expected.unwrap_or(f64::NAN))
            .float("weil_bound", weil)
            .check(ok))
    })
}
