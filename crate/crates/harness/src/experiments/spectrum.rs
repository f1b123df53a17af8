use std::path::PathBuf;

use zq_incidence::incidence::IncidenceKind;
use zq_incidence::spectra::{build_matrix, closed_form_top_singular_value, mu2_bound, spectrum, SpectrumReport};

use super::{modulus, run_jobs};
use crate::config::Config;
use crate::error::{config_err, Result};
use crate::record::{col, Column, Kind::*, Row};

pub const KEYS: &[&str] = &["moduli", "kind", "n", "m", "lambda", "cluster_tol", "dump"];

pub const COLUMNS: &[Column] = &[
    col("q", Int, "modulus"),
    col("kind", Text, "dot, det or crossratio"),
    col("lambda", Int, "target value"),
    col("rows", Int, "row family size"),
    col("cols", Int, "column family size"),
    col("symmetric", Bool, "eigenvalues when true, singular values otherwise"),
    col("top_value", Float, "largest eigenvalue or singular value"),
    col("top_expected", Float, "q^(n-1) for dot, nan otherwise"),
    col("top_closed_form", Float, "sqrt(MN)/(q-1) for det, nan otherwise"),
    col("second_value", Float, "max |mu_j| over j >= 2"),
    col(
        "mu2_bound",
        Float,
        "(3 m^-1 q^(4n-4) Theta(n))^(1/4) for dot, nan otherwise",
    ),
    col("clusters", Text, "value:multiplicity, space separated"),
    col("min_nontop_multiplicity", Int, "smallest non-top cluster, -1 if none"),
    col(
        "required_multiplicity",
        Int,
        "(q-1)/2 when the SL_2 argument applies, 0 otherwise",
    ),
    col("sigma_exact", Int, "sum over a,a' of (sum_b M(a,b) M(a',b))^2"),
    col("sigma_diagonal", Int, "a = a' part of sigma_exact"),
    col("sigma_offdiagonal", Int, "a != a' part of sigma_exact"),
    col("sigma_closed_form", Float, "q^(2d^2-4) for det, nan otherwise"),
    col("fourth_moment_float", Float, "sum of mu_j^4 from the computed spectrum"),
    col("fourth_moment_rel_error", Float, "|float - exact| / exact"),
];

fn parse_kind(cfg: &Config) -> Result<IncidenceKind> {
    match cfg.get_str("kind", "dot") {
        "dot" => Ok(IncidenceKind::Dot {
            n: cfg.get("n", 2usize)?,
        }),
        "det" => Ok(IncidenceKind::Det {
            n: cfg.get("n", 1usize)?,
            m: cfg.get("m", 1usize)?,
        }),
        "crossratio" => Ok(IncidenceKind::CrossRatio),
        other => Err(config_err(format!(
            "kind: expected dot, det or crossratio, got {other:?}"
        ))),
    }
}

fn clusters_text(r: &SpectrumReport<f64>) -> String {
    r.clusters
        .iter()
        .map(|c| format!("{:.6}:{}", c.value, c.multiplicity))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn run(cfg: &Config) -> Result<Vec<Row>> {
    let moduli = cfg.get_list::<u64>("moduli", &[5, 7, 11, 13])?;
    let kind = parse_kind(cfg)?;
    let default_lambda = if kind == IncidenceKind::CrossRatio { 2 } else { 1 };
    let lambda = cfg.get("lambda", default_lambda)?;
    let dump = cfg.raw("dump").map(PathBuf::from);
    run_jobs(cfg, &moduli, |_, &q| {
        let md = modulus(q)?;
        let matrix = build_matrix(kind, &md, lambda, cfg.matrix_cap)?;
        let tol = cfg.get("cluster_tol", 1e-6 * q as f64)?;
        let (_, report) = spectrum::<f64>(&matrix, Some(tol))?;
        let norm = matrix.rectangular_norm();
        let rel = report.fourth_moment_rel_error().unwrap_or(f64::NAN);
        let mut ok = rel < 1e-6;
        let (mut top_expected, mut mu2, mut required) = (f64::NAN, f64::NAN, 0u64);
        let (mut top_closed, mut sigma_closed) = (f64::NAN, f64::NAN);
        match kind {
            IncidenceKind::Dot { n } => {
                top_expected = (q as f64).powi(n as i32 - 1);
                ok &= (report.top_value - top_expected).abs() < 1e-8;
                if n == 2 && md.is_prime() && q >= 5 {
                    mu2 = mu2_bound(&md, n)?;
                    required = (q - 1) / 2;
                    ok &= report.second_value <= mu2 + 1e-9;
                    ok &= report.min_nontop_multiplicity().is_none_or(|m| m as u64 >= required);
                }
            }
            IncidenceKind::Det { n, m } => {
                let d = (n + m) as i32;
                top_closed = closed_form_top_singular_value(matrix.rows(), matrix.cols(), q);
                sigma_closed = (q as f64).powi(2 * d * d - 4);
            }
            IncidenceKind::CrossRatio => {}
        }
        if let Some(dir) = &dump {
            let name = format!("{}_q{}_l{}.txt", kind.name(), q, lambda);
            crate::write_file(&dir.join(name), &matrix.dump())?;
        }
        Ok(Row::new()
            .int("q", q)
            .text("kind", kind.name())
            .int("lambda", matrix.lambda())
            .uint("rows", matrix.rows())
            .uint("cols", matrix.cols())
            .boolean("symmetric", matrix.is_symmetric())
            .float("top_value", report.top_value)
            .float("top_expected", top_expected)
            .float("top_closed_form", top_closed)
            .float("second_value", report.second_value)
            .float("mu2_bound", mu2)
            .text("clusters", clusters_text(&report))
            .int(
                "min_nontop_multiplicity",
                report.min_nontop_multiplicity().map_or(-1, |m| m as i128),
            )
            .int("required_multiplicity", required)
            .int("sigma_exact", norm.total as i128)
            .int("sigma_diagonal", norm.diagonal as i128)
            .int("sigma_offdiagonal", norm.off_diagonal as i128)
            .float("sigma_closed_form", sigma_closed)
            .float("fourth_moment_float", report.fourth_moment_float)
            .float("fourth_moment_rel_error", rel)
            .check(ok))
    })
}
