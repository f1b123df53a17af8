use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use zq_harness::{Config, Experiment, Format, HarnessError};

#[derive(Parser)]
#[command(
    name = "zqlab",
    version,
    about = "Incidence, character-sum and Zaremba experiments over Z_q"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dot-product incidences against the Theta-form inequality
    DotIncidence(Opts),
    /// Determinant incidences and both main-term normalizations
    DetIncidence(Opts),
    /// Cross-ratio incidences and exhaustive pair caps
    CrossratioIncidence(Opts),
    /// Spectra of full incidence matrices
    Spectrum(Opts),
    /// Twisted Kloosterman sums
    Kloosterman(Opts),
    /// Bilinear forms in Kloosterman sums
    Bilinear(Opts),
    /// Character sums over the hyperbola (a+x)(b+y) = 1
    Hyperbola(Opts),
    /// Group-twisted sums, the lift identity and T_2k energies
    Proposition41(Opts),
    /// Character sums over A cap A^-1 and A^-1 cap (A^-1 + 1)
    IntersectionCharsum(Opts),
    /// Zaremba sets, subgroup witnesses and their structure
    Zaremba(Opts),
    /// T_2k energies of matrix families
    Energy(Opts),
}

#[derive(clap::Args)]
struct Opts {
    /// Flat `key = value` config file
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Worker threads, 0 for one per core
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long)]
    matrix_cap: Option<usize>,
    /// Add a wall_ms column
    #[arg(long)]
    timing: bool,
    /// Extra `key=value` parameter, repeatable
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Command {
    fn split(self) -> (Experiment, Opts) {
        match self {
            Command::DotIncidence(o) => (Experiment::DotIncidence, o),
            Command::DetIncidence(o) => (Experiment::DetIncidence, o),
            Command::CrossratioIncidence(o) => (Experiment::CrossratioIncidence, o),
            Command::Spectrum(o) => (Experiment::Spectrum, o),
            Command::Kloosterman(o) => (Experiment::Kloosterman, o),
            Command::Bilinear(o) => (Experiment::Bilinear, o),
            Command::Hyperbola(o) => (Experiment::Hyperbola, o),
            Command::Proposition41(o) => (Experiment::Proposition41, o),
            Command::IntersectionCharsum(o) => (Experiment::IntersectionCharsum, o),
            Command::Zaremba(o) => (Experiment::Zaremba, o),
            Command::Energy(o) => (Experiment::Energy, o),
        }
    }
}

fn config(experiment: Experiment, o: &Opts) -> zq_harness::Result<Config> {
    let mut cfg = match &o.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
                path: path.clone(),
                source,
            })?;
            Config::parse(&text, Some(experiment))?
        }
        None => Config::new(experiment),
    };
    cfg.set("experiment", experiment.name())?;
    for kv in &o.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| HarnessError::Config(format!("--set expects key=value, got {kv:?}")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(s) = o.seed {
        cfg.seed = s;
    }
    if let Some(t) = o.trials {
        cfg.set("trials", &t.to_string())?;
    }
    if let Some(out) = &o.out {
        cfg.out = Some(out.clone());
    }
    if let Some(f) = &o.format {
        cfg.format = f.parse::<Format>()?;
    }
    if let Some(c) = o.matrix_cap {
        cfg.matrix_cap = c;
    }
    cfg.timing |= o.timing;
    Ok(cfg)
}

fn main() -> ExitCode {
    let (experiment, opts) = Cli::parse().command.split();
    let result = config(experiment, &opts).and_then(|cfg| {
        let table = zq_harness::run(&cfg, opts.threads)?;
        zq_harness::write_output(&table, &cfg)?;
        Ok(table)
    });
    match result {
        Ok(table) if table.hard_failures() > 0 => {
            eprintln!(
                "{}: {} of {} hard checks failed",
                experiment,
                table.hard_failures(),
                table.hard_checks()
            );
            ExitCode::from(1)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
