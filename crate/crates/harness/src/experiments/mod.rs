//! One module per experiment. Each declares its parameter keys and
//! columns, and turns a [`Config`] into rows.

mod bilinear;
mod crossratio;
mod det;
mod dot;
mod energy;
mod hyperbola;
mod intersection;
mod kloosterman;
mod proposition;
mod spectrum;
mod zaremba;

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use zq_incidence::modring::{is_prime, Character};
use zq_incidence::Modulus;

use crate::config::{Config, Experiment};
use crate::error::{config_err, Result};
use crate::record::{col, Column, Kind, Row, Table};

pub fn param_keys(e: Experiment) -> &'static [&'static str] {
    match e {
        Experiment::DotIncidence => dot::KEYS,
        Experiment::DetIncidence => det::KEYS,
        Experiment::CrossratioIncidence => crossratio::KEYS,
        Experiment::Spectrum => spectrum::KEYS,
        Experiment::Kloosterman => kloosterman::KEYS,
        Experiment::Bilinear => bilinear::KEYS,
        Experiment::Hyperbola => hyperbola::KEYS,
        Experiment::Proposition41 => proposition::KEYS,
        Experiment::IntersectionCharsum => intersection::KEYS,
        Experiment::Zaremba => zaremba::KEYS,
        Experiment::Energy => energy::KEYS,
    }
}

fn base_columns(e: Experiment) -> &'static [Column] {
    match e {
        Experiment::DotIncidence => dot::COLUMNS,
        Experiment::DetIncidence => det::COLUMNS,
        Experiment::CrossratioIncidence => crossratio::COLUMNS,
        Experiment::Spectrum => spectrum::COLUMNS,
        Experiment::Kloosterman => kloosterman::COLUMNS,
        Experiment::Bilinear => bilinear::COLUMNS,
        Experiment::Hyperbola => hyperbola::COLUMNS,
        Experiment::Proposition41 => proposition::COLUMNS,
        Experiment::IntersectionCharsum => intersection::COLUMNS,
        Experiment::Zaremba => zaremba::COLUMNS,
        Experiment::Energy => energy::COLUMNS,
    }
}

const WALL: Column = col("wall_ms", Kind::Float, "wall-clock time of the row in milliseconds");

/// Columns of an experiment's output, including `wall_ms` when timing is on.
pub fn columns(cfg: &Config) -> Vec<Column> {
    let mut c = base_columns(cfg.experiment).to_vec();
    if cfg.timing {
        c.push(WALL);
    }
    c
}

/// Run the configured experiment on the current rayon pool.
pub fn run(cfg: &Config) -> Result<Table> {
    let rows = match cfg.experiment {
        Experiment::DotIncidence => dot::run(cfg),
        Experiment::DetIncidence => det::run(cfg),
        Experiment::CrossratioIncidence => crossratio::run(cfg),
        Experiment::Spectrum => spectrum::run(cfg),
        Experiment::Kloosterman => kloosterman::run(cfg),
        Experiment::Bilinear => bilinear::run(cfg),
        Experiment::Hyperbola => hyperbola::run(cfg),
        Experiment::Proposition41 => proposition::run(cfg),
        Experiment::IntersectionCharsum => intersection::run(cfg),
        Experiment::Zaremba => zaremba::run(cfg),
        Experiment::Energy => energy::run(cfg),
    }?;
    Ok(Table::new(cfg.experiment, columns(cfg), rows))
}

/// Evaluate jobs in parallel; rows come back in job order, each job drawing
/// from its own random stream.
fn run_jobs<J, F>(cfg: &Config, jobs: &[J], f: F) -> Result<Vec<Row>>
where
    J: Sync,
    F: Fn(&mut rand_chacha::ChaCha8Rng, &J) -> Result<Row> + Sync,
{
    jobs.par_iter()
        .enumerate()
        .map(|(i, job)| {
            let start = Instant::now();
            let mut rng = crate::sampling::trial_rng(cfg.seed, i as u64);
            let row = f(&mut rng, job)?;
            Ok(if cfg.timing {
                row.float("wall_ms", start.elapsed().as_secs_f64() * 1e3)
            } else {
                row
            })
        })
        .collect()
}

/// `(modulus, trial)` for every configured modulus.
fn trial_grid(cfg: &Config, moduli: &[u64]) -> Vec<(u64, usize)> {
    moduli
        .iter()
        .flat_map(|&q| (0..cfg.trials).map(move |t| (q, t)))
        .collect()
}

fn modulus(q: u64) -> Result<Modulus> {
    Ok(Modulus::new(q)?)
}

fn prime(q: u64) -> Result<u64> {
    if is_prime(q) {
        Ok(q)
    } else {
        Err(config_err(format!("{q} is not prime")))
    }
}

/// Configured character index, or a random non-principal one.
fn character<R: Rng>(cfg: &Config, rng: &mut R, p: u64) -> Result<Character> {
    let idx = match cfg.get_opt::<u64>("chi")? {
        Some(i) => i,
        None => rng.random_range(1..p - 1),
    };
    Ok(Character::new(p, idx)?)
}

/// Size from the config, or uniform in `1..=max`.
fn size<R: Rng>(cfg: &Config, rng: &mut R, key: &str, max: usize) -> Result<usize> {
    match cfg.get_opt::<usize>(key)? {
        Some(s) if s > max => Err(config_err(format!("{key} = {s} exceeds the domain size {max}"))),
        Some(s) => Ok(s),
        None => Ok(rng.random_range(1..=max.max(1))),
    }
}
