use rand::Rng;
use zq_incidence::charsums::{bilinear_form, fourier_lp_norm};
use zq_incidence::{ComplexVec, C64};

use super::{character, prime, run_jobs, trial_grid};
use crate::config::Config;
use crate::error::{config_err, Result};
use crate::record::{col, Column, Kind::*, Row};
use crate::sampling::disk_weight;

pub const KEYS: &[&str] = &["moduli", "chi", "len_alpha", "len_beta"];

pub const COLUMNS: &[Column] = &[
    col("trial", Int, "trial index within p"),
    col("p", Int, "prime modulus"),
    col("chi_index", Int, "character exponent"),
    col("len_alpha", Int, "N, alpha supported on t1 + [1, N]"),
    col("len_beta", Int, "M, beta supported on t2 + [1, M]"),
    col("t1", Int, "shift of the alpha interval"),
    col("t2", Int, "shift of the beta interval"),
    col("abs_direct", Float, "|S_chi(alpha, beta)| by the triple sum"),
    col("abs_tabulated", Float, "|S_chi(alpha, beta)| from the K table"),
    col("rel_diff", Float, "|direct - tabulated| / max(|direct|, 1)"),
    col("alpha_l1", Float, "||alpha||_1"),
    col("alpha_l2", Float, "||alpha||_2"),
    col("beta_l2", Float, "||beta||_2"),
    col(
        "alpha_hat_l43",
        Float,
        "L^(4/3) norm of the unnormalized transform of alpha",
    ),
    col("trivial_bound", Float, "||alpha||_2 ||beta||_2 p"),
    col("ratio_to_trivial", Float, "abs_direct / trivial_bound"),
    col("nm1_rhs", Float, "first Kloosterman NM bound with constant 1"),
    col("nm2_condition", Bool, "M^2 N^2 ||alpha_hat||^12 < p ||alpha||_2^12"),
    col("nm2_rhs", Float, "second Kloosterman NM bound with constant 1"),
];

fn interval_weights<R: Rng>(rng: &mut R, p: u64, shift: u64, len: u64) -> ComplexVec {
    let mut v = vec![C64::new(0.0, 0.0); p as usize];
    for i in 1..=len {
        v[((shift + i) % p) as usize] = disk_weight(rng);
    }
    ComplexVec::new(v).expect("weights inside the unit disk")
}

pub fn run(cfg: &Config) -> Result<Vec<Row>> {
    let moduli = cfg.get_list::<u64>("moduli", &[11, 31, 101])?;
    for &p in &moduli {
        if prime(p)? < 3 {
            return Err(config_err("bilinear forms need p >= 3"));
        }
    }
    let jobs = trial_grid(cfg, &moduli);
    run_jobs(cfg, &jobs, |rng, &(p, t)| {
        let chi = character(cfg, rng, p)?;
        let root = (p as f64).sqrt().floor() as u64;
        let n = cfg.get("len_alpha", root)?;
        let m = cfg.get("len_beta", root)?;
        if n == 0 || m == 0 || n >= p || m >= p {
            return Err(config_err("len_alpha and len_beta must lie in [1, p)"));
        }
        let (t1, t2) = (rng.random_range(0..p), rng.random_range(0..p));
        let alpha = interval_weights(rng, p, t1, n);
        let beta = interval_weights(rng, p, t2, m);
        let s = bilinear_form(&chi, &alpha, &beta)?;
        let pf = p as f64;
        let (a1, a2, b2) = (alpha.norm1(), alpha.norm2(), beta.norm2());
        let hat = fourier_lp_norm(&alpha, 4.0 / 3.0);
        let (nf, mf) = (n as f64, m as f64);
        let tail = (a2 * a1).sqrt() * pf.powf(0.75);
        let nm1 = b2 * (hat * (nf * mf).powf(7.0 / 48.0) * pf.powf(23.0 / 24.0) + tail);
        let nm2_condition = mf * mf * nf * nf * hat.powi(12) < pf * a2.powi(12);
        let nm2 = b2
            * (hat.powf(6.0 / 7.0) * a2.powf(1.0 / 7.0) * (nf * mf).powf(1.0 / 7.0) * pf.powf(13.0 / 14.0)
                + tail
                + pf.powf(13.0 / 12.0) * hat);
        let trivial = a2 * b2 * pf;
        let rel = s.rel_diff();
        Ok(Row::new()
            .uint("trial", t)
            .int("p", p)
            .int("chi_index", chi.index())
            .int("len_alpha", n)
            .int("len_beta", m)
            .int("t1", t1)
            .int("t2", t2)
            .float("abs_direct", s.direct.norm())
            .float("abs_tabulated", s.tabulated.norm())
            .float("rel_diff", rel)
            .float("alpha_l1", a1)
            .float("alpha_l2", a2)
            .float("beta_l2", b2)
            .float("alpha_hat_l43", hat)
            .float("trivial_bound", trivial)
            .float("ratio_to_trivial", s.direct.norm() / trivial)
            .float("nm1_rhs", nm1)
            .boolean("nm2_condition", nm2_condition)
            .float("nm2_rhs", nm2)
            .check(rel < 1e-6))
    })
}
