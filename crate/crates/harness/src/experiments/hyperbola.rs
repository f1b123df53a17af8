use zq_incidence::charsums::{group_twisted_sum, hyperbola_matrix, hyperbola_sum, MatrixFamily, WeightedSet};
use zq_incidence::{PointSet, C64};

use super::{character, modulus, prime, run_jobs, size, trial_grid};
use crate::config::Config;
use crate::error::Result;
use crate::record::{col, Column, Kind::*, Row};
use crate::sampling::{sample_subset, weighted_subset};

pub const KEYS: &[&str] = &["moduli", "chi", "size_a", "size_b", "size_x", "size_y"];

pub const COLUMNS: &[Column] = &[
    col("trial", Int, "trial index within p"),
    col("p", Int, "prime modulus"),
    col("chi_index", Int, "character exponent"),
    col("size_a", Int, "|A|, disk weights c_A"),
    col("size_b", Int, "|B|, disk weights c_B"),
    col("size_x", Int, "|X|"),
    col("size_y", Int, "|Y|"),
    col("solutions", Int, "#{(a,x,b,y): (a+x)(b+y) = 1}"),
    col("abs_sum", Float, "|sum of c_A(a) c_B(b) chi(a+x)| over solutions"),
    col("trivial_bound", Float, "sqrt(|A||B|) |X||Y|"),
    col("ratio", Float, "abs_sum / trivial_bound"),
    col("saving_exponent", Float, "log(trivial_bound / abs_sum) / log p"),
    col(
        "encoding_residual",
        Float,
        "|sum - sum over the g_(a,b) family encoding|",
    ),
];

/// The same sum through `Σ_{a,b} c_A(a) c_B(b) Σ_{x, y: g_{a,b} x = y} χ(a + x)`.
fn via_matrices(
    chi: &zq_incidence::Character,
    a: &WeightedSet<f64>,
    b: &WeightedSet<f64>,
    x: &PointSet,
    y: &PointSet,
) -> Result<C64> {
    let p = chi.p();
    let (xw, yw) = (WeightedSet::unit(x.clone())?, WeightedSet::unit(y.clone())?);
    let mut total = C64::new(0.0, 0.0);
    for (av, aw) in a.iter() {
        for (bv, bw) in b.iter() {
            let g = MatrixFamily::new(p, [hyperbola_matrix(av, bv, p)])?;
            total += aw * bw * group_twisted_sum(chi, &g, &xw, &yw)?;
        }
    }
    Ok(total)
}

pub fn run(cfg: &Config) -> Result<Vec<Row>> {
    let moduli = cfg.get_list::<u64>("moduli", &[31, 101])?;
    for &p in &moduli {
        prime(p)?;
    }
    let jobs = trial_grid(cfg, &moduli);
    run_jobs(cfg, &jobs, |rng, &(p, t)| {
        let chi = character(cfg, rng, p)?;
        let field = PointSet::full(modulus(p)?, 1);
        let sa = size(cfg, rng, "size_a", field.len())?;
        let sb = size(cfg, rng, "size_b", field.len())?;
        let sx = size(cfg, rng, "size_x", field.len())?;
        let sy = size(cfg, rng, "size_y", field.len())?;
        let a = weighted_subset(rng, &field, sa)?;
        let b = weighted_subset(rng, &field, sb)?;
        let x = sample_subset(rng, &field, sx)?;
        let y = sample_subset(rng, &field, sy)?;
        let h = hyperbola_sum(&chi, &a, &b, &x, &y)?;
        let enc = via_matrices(&chi, &a, &b, &x, &y)?;
        let residual = (h.value - enc).norm();
        let abs = h.value.norm();
        Ok(Row::new()
            .uint("trial", t)
            .int("p", p)
            .int("chi_index", chi.index())
            .uint("size_a", sa)
            .uint("size_b", sb)
            .uint("size_x", sx)
            .uint("size_y", sy)
            .int("solutions", h.solutions)
            .float("abs_sum", abs)
            .float("trivial_bound", h.trivial_bound)
            .float("ratio", abs / h.trivial_bound)
            .float("saving_exponent", (h.trivial_bound / abs).ln() / (p as f64).ln())
            .float("encoding_residual", residual)
            .check(residual <= 1e-9 * h.trivial_bound.max(1.0)))
    })
}
