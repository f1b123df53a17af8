use std::collections::HashMap;

use num_bigint::BigInt;
use zq_incidence::charsums::{energy_t2k, gl2_order, MatrixFamily, DEFAULT_ENERGY_CAP};
use zq_incidence::modring::Mat2;
use zq_incidence::spectra::{enumerate_gl2, DEFAULT_GROUP_CAP};

use super::{prime, run_jobs};
use crate::config::Config;
use crate::error::{config_err, Result};
use crate::record::{col, Column, Kind::*, Row};
use crate::sampling::sample_matrices;

pub const KEYS: &[&str] = &["moduli", "k", "group_size", "oracle"];

/// Largest family checked against the direct enumeration.
const ORACLE_LIMIT: usize = 12;

pub const COLUMNS: &[Column] = &[
    col("trial", Int, "trial index within (p, |G|)"),
    col("p", Int, "prime modulus"),
    col("k", Int, "energy order"),
    col("size_g", Int, "|G|"),
    col("gl2_order", Int, "|GL_2(F_p)|"),
    col("energy_raw", Int, "T_2k(G) by convolution"),
    col("energy_balanced", Rational, "T_2k(f_G) = T_2k(G) - |G|^(4k)/|GL_2|"),
    col("oracle", Int, "T_4(G) from the |G|^4 product histogram, -1 if skipped"),
];

/// Histogram of `g_1 h_1^{-1} g_2 h_2^{-1}`, summed in squares.
fn t4_direct(g: &[Mat2], p: u64) -> u128 {
    let inv: Vec<Mat2> = g.iter().map(|h| h.inverse(p).expect("invertible")).collect();
    let mut hist: HashMap<Mat2, u128> = HashMap::new();
    for a in g {
        for bi in &inv {
            let ab = a.mul(bi, p);
            for c in g {
                let abc = ab.mul(c, p);
                for di in &inv {
                    *hist.entry(abc.mul(di, p)).or_insert(0) += 1;
                }
            }
        }
    }
    hist.values().map(|v| v * v).sum()
}

pub fn run(cfg: &Config) -> Result<Vec<Row>> {
    let moduli = cfg.get_list::<u64>("moduli", &[5])?;
    let sizes = cfg.get_list::<usize>("group_size", &[4, 8, 12])?;
    let k = cfg.get("k", 2usize)?;
    if !(2..=3).contains(&k) {
        return Err(config_err("k must be 2 or 3"));
    }
    let use_oracle = cfg.get_bool("oracle", true)?;
    let mut groups = Vec::new();
    for &p in &moduli {
        groups.push((p, enumerate_gl2(prime(p)?, DEFAULT_GROUP_CAP)?));
    }
    let jobs: Vec<(u64, usize, usize)> = moduli
        .iter()
        .flat_map(|&p| sizes.iter().flat_map(move |&s| (0..cfg.trials).map(move |t| (p, s, t))))
        .collect();
    run_jobs(cfg, &jobs, |rng, &(p, s, t)| {
        let gl2 = &groups.iter().find(|g| g.0 == p).expect("group for every modulus").1;
        let g = MatrixFamily::new(p, sample_matrices(rng, gl2, s)?)?;
        let e = energy_t2k(&g, k, DEFAULT_ENERGY_CAP)?;
        let oracle = (use_oracle && k == 2 && s <= ORACLE_LIMIT).then(|| t4_direct(g.elements(), p));
        let ok = oracle.is_none_or(|o| e.raw == BigInt::from(o));
        Ok(Row::new()
            .uint("trial", t)
            .int("p", p)
            .uint("k", k)
            .uint("size_g", s)
            .int("gl2_order", gl2_order(p) as i128)
            .int("energy_raw", i128::try_from(&e.raw).unwrap_or(i128::MAX))
            .rational("energy_balanced", e.balanced)
            .int("oracle", oracle.map_or(-1, |o| o as i128))
            .check(ok))
    })
}
