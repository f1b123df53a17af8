use zq_incidence::modring::{gcd, is_prime};
use zq_incidence::zaremba::{
    ad_regularity, cf_expand, cf_value, energy_bound_report, find_in_subgroup, minimal_bound_in_subgroup, zaremba_set,
    SubgroupSpec, WitnessParams,
};

use super::run_jobs;
use crate::config::Config;
use crate::error::{config_err, Result};
use crate::record::{col, Column, Kind::*, Row};

pub const KEYS: &[&str] = &[
    "moduli",
    "max_quotient",
    "window",
    "w",
    "witness_n",
    "witness_c",
    "witness_c_star",
];

pub const COLUMNS: &[Column] = &[
    col("q", Int, "modulus"),
    col("max_quotient", Int, "M"),
    col("size", Int, "|Z_M(q)|"),
    col("members", Text, "elements of Z_M(q), space separated"),
    col(
        "roundtrip_ok",
        Bool,
        "every a/q expands and reassembles exactly, membership matches the quotient bound",
    ),
    col(
        "qr_witness",
        Int,
        "least quadratic residue in Z_M(q), -1 if none or q not an odd prime",
    ),
    col("qr_intersection", Int, "|Z_M(q) cap QR|, -1 if q not an odd prime"),
    col("qr_lower_bound", Float, "|Z||QR|/(q-1) - C |Z| N^(-c_*)"),
    col(
        "qr_min_bound",
        Int,
        "least M with a quadratic residue in Z_M(q), -1 if q not an odd prime",
    ),
    col("log_ratio", Float, "log q / log log q"),
    col("mult_energy", Int, "E^x(Z_M(q))"),
    col("energy_bound", Float, "|Z|^3 (q/|Z|)^(3-4w) N^(-2(1-w))"),
    col("energy_trivial", Int, "|Z|^3"),
    col("energy_random", Float, "|Z|^4/q + |Z|^2"),
    col("in_regime", Bool, "w > 3/4"),
    col(
        "ad_min_ratio",
        Float,
        "min |Z cap (D+z)| / (|D|^w N^(1-w)), nan if no window",
    ),
    col("ad_max_ratio", Float, "max of the same ratio"),
];

fn roundtrip(q: u64, bound: u64, members: &[u64]) -> Result<bool> {
    for a in (1..q).filter(|&a| gcd(a, q) == 1) {
        let cf = cf_expand(a, q)?;
        if cf_value(cf.quotients())? != (a, q) {
            return Ok(false);
        }
        if (cf.max_quotient() <= bound) != members.binary_search(&a).is_ok() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn run(cfg: &Config) -> Result<Vec<Row>> {
    let moduli = cfg.get_list::<u64>("moduli", &[7, 101, 1009])?;
    let bounds = cfg.get_list::<u64>("max_quotient", &[3, 5])?;
    let window = cfg.get("window", 8u64)?;
    let w = cfg.get("w", 0.8f64)?;
    if window == 0 || !(w > 0.0 && w <= 1.0) {
        return Err(config_err("window must be positive and w in (0, 1]"));
    }
    let params = WitnessParams {
        n: cfg.get("witness_n", 1u64)?,
        c: cfg.get("witness_c", 1.0)?,
        c_star: cfg.get("witness_c_star", 1.0)?,
    };
    let jobs: Vec<(u64, u64)> = moduli
        .iter()
        .flat_map(|&q| bounds.iter().map(move |&m| (q, m)))
        .collect();
    run_jobs(cfg, &jobs, |_, &(q, bound)| {
        let z = zaremba_set(q, bound)?;
        let members = z.residues().to_vec();
        let ok = roundtrip(q, bound, &members)?;
        let (mut witness, mut inter, mut lower, mut min_bound) = (-1i128, -1i128, f64::NAN, -1i128);
        if is_prime(q) && q > 2 {
            let qr = SubgroupSpec::quadratic_residues(q)?;
            let r = find_in_subgroup(q, bound, &qr, params)?;
            witness = r.witness.map_or(-1, i128::from);
            inter = r.intersection as i128;
            lower = r.lower_bound;
            min_bound = minimal_bound_in_subgroup(&qr)? as i128;
        }
        let qf = q as f64;
        let energy = energy_bound_report(&z, window, w, q)?;
        let ad = ad_regularity(&z, window, w)?;
        let text: Vec<String> = members.iter().map(u64::to_string).collect();
        Ok(Row::new()
            .int("q", q)
            .int("max_quotient", bound)
            .uint("size", members.len())
            .text("members", text.join(" "))
            .boolean("roundtrip_ok", ok)
            .int("qr_witness", witness)
            .int("qr_intersection", inter)
            .float("qr_lower_bound", lower)
            .int("qr_min_bound", min_bound)
            .float("log_ratio", qf.ln() / qf.ln().ln())
            .int("mult_energy", energy.energy as i128)
            .float("energy_bound", energy.bound)
            .int("energy_trivial", energy.trivial as i128)
            .float("energy_random", energy.random_baseline)
            .boolean("in_regime", energy.in_regime)
            .float("ad_min_ratio", ad.min_ratio.unwrap_or(f64::NAN))
            .float("ad_max_ratio", ad.max_ratio.unwrap_or(f64::NAN))
            .check(ok))
    })
}
