use num_traits::ToPrimitive;
use rand::Rng;
use zq_incidence::charsums::{energy_t2k, projective_lift_check, prop_rhs, MatrixFamily, DEFAULT_ENERGY_CAP};
use zq_incidence::spectra::{enumerate_gl2, DEFAULT_GROUP_CAP};
use zq_incidence::{Character, PointSet};

use super::{modulus, prime, run_jobs, size, trial_grid};
use crate::config::Config;
use crate::error::{config_err, Result};
use crate::record::{col, Column, Kind::*, Row};
use crate::sampling::{sample_matrices, weighted_subset};

pub const KEYS: &[&str] = &["moduli", "chi", "k", "group_size", "size_a", "size_b"];

pub const COLUMNS: &[Column] = &[
    col("trial", Int, "trial index within p"),
    col("p", Int, "prime modulus"),
    col("chi_index", Int, "character exponent, 0 is principal"),
    col("k", Int, "energy order"),
    col("size_g", Int, "|G| in GL_2(F_p)"),
    col("size_a", Int, "|A|, disk weights"),
    col("size_b", Int, "|B|, disk weights"),
    col(
        "lhs_abs",
        Float,
        "|sum over a, b, g with ga = b of c_A(a) c_B(b) chi(gamma a + delta)|",
    ),
    col("lifted_abs", Float, "|sum over lifts to F_p^2 minus 0| / (p-1)"),
    col("lift_residual", Float, "|lifted - (p-1) lhs|"),
    col("lift_tolerance", Float, "1e-6 (p-1) sqrt(|A||B|) |G|"),
    col("energy_raw", Int, "T_2k(G)"),
    col("energy_balanced", Rational, "T_2k(f_G)"),
    col(
        "rhs",
        Float,
        "sqrt(|A||B||G|) T^(1/8k) + sqrt(|A||B|) |G| max(|A|,|B|)^(-1/2k)",
    ),
    col("slack", Float, "rhs / (|lhs| / 4)"),
];

pub fn run(cfg: &Config) -> Result<Vec<Row>> {
    let moduli = cfg.get_list::<u64>("moduli", &[7, 11, 13])?;
    let k = cfg.get("k", 2usize)?;
    if !(2..=3).contains(&k) {
        return Err(config_err("k must be 2 or 3"));
    }
    let mut groups = Vec::new();
    for &p in &moduli {
        groups.push((p, enumerate_gl2(prime(p)?, DEFAULT_GROUP_CAP)?));
    }
    let jobs = trial_grid(cfg, &moduli);
    run_jobs(cfg, &jobs, |rng, &(p, t)| {
        let gl2 = &groups.iter().find(|g| g.0 == p).expect("group for every modulus").1;
        let idx = match cfg.get_opt::<u64>("chi")? {
            Some(i) => i,
            None => rng.random_range(0..p - 1),
        };
        let chi = Character::new(p, idx)?;
        let sg = cfg.get("group_size", 20usize.min(gl2.len()))?;
        let g = MatrixFamily::new(p, sample_matrices(rng, gl2, sg)?)?;
        let field = PointSet::full(modulus(p)?, 1);
        let sa = size(cfg, rng, "size_a", field.len())?;
        let sb = size(cfg, rng, "size_b", field.len())?;
        let a = weighted_subset(rng, &field, sa)?;
        let b = weighted_subset(rng, &field, sb)?;
        let lift = projective_lift_check(&chi, &g, &a, &b)?;
        let pm1 = (p - 1) as f64;
        let lhs = lift.scaled.norm() / pm1;
        let energy = energy_t2k(&g, k, DEFAULT_ENERGY_CAP)?;
        let t_bal = energy.balanced.to_f64().unwrap_or(f64::INFINITY);
        let rhs = prop_rhs(k, sa as u64, sb as u64, sg as u64, t_bal);
        let slack = if lhs == 0.0 { f64::INFINITY } else { rhs / (lhs / 4.0) };
        let tol = 1e-6 * lift.trivial_bound;
        Ok(Row::new()
            .uint("trial", t)
            .int("p", p)
            .int("chi_index", idx)
            .uint("k", k)
            .uint("size_g", sg)
            .uint("size_a", sa)
            .uint("size_b", sb)
            .float("lhs_abs", lhs)
            .float("lifted_abs", lift.lifted.norm() / pm1)
            .float("lift_residual", lift.residual)
            .float("lift_tolerance", tol)
            .int("energy_raw", i128::try_from(&energy.raw).unwrap_or(i128::MAX))
            .rational("energy_balanced", energy.balanced)
            .float("rhs", rhs)
            .float("slack", slack)
            .check(lift.residual < tol.max(1e-9)))
    })
}
