//! Flat `key = value` configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{config_err, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Experiment {
    DotIncidence,
    DetIncidence,
    CrossratioIncidence,
    Spectrum,
    Kloosterman,
    Bilinear,
    Hyperbola,
    Proposition41,
    IntersectionCharsum,
    Zaremba,
    Energy,
}

impl Experiment {
    pub const ALL: [Experiment; 11] = [
        Experiment::DotIncidence,
        Experiment::DetIncidence,
        Experiment::CrossratioIncidence,
        Experiment::Spectrum,
        Experiment::Kloosterman,
        Experiment::Bilinear,
        Experiment::Hyperbola,
        Experiment::Proposition41,
        Experiment::IntersectionCharsum,
        Experiment::Zaremba,
        Experiment::Energy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::DotIncidence => "dot-incidence",
            Experiment::DetIncidence => "det-incidence",
            Experiment::CrossratioIncidence => "crossratio-incidence",
            Experiment::Spectrum => "spectrum",
            Experiment::Kloosterman => "kloosterman",
            Experiment::Bilinear => "bilinear",
            Experiment::Hyperbola => "hyperbola",
            Experiment::Proposition41 => "proposition41",
            Experiment::IntersectionCharsum => "intersection-charsum",
            Experiment::Zaremba => "zaremba",
            Experiment::Energy => "energy",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = crate::error::HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| config_err(format!("unknown experiment {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = crate::error::HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(config_err(format!("unknown format {s:?}"))),
        }
    }
}

/// Parsed configuration. Keys beyond the common ones are kept verbatim in
/// `params` and read by the experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub experiment: Experiment,
    pub trials: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub matrix_cap: usize,
    pub timing: bool,
    params: BTreeMap<String, String>,
}

const COMMON_KEYS: [&str; 7] = ["experiment", "trials", "seed", "out", "format", "matrix_cap", "timing"];

impl Config {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            trials: 10,
            seed: 0,
            out: None,
            format: Format::Csv,
            matrix_cap: zq_incidence::spectra::DEFAULT_MATRIX_CAP,
            timing: false,
            params: BTreeMap::new(),
        }
    }

    /// Parse a config file. `experiment` may be omitted when `fallback` is given.
    pub fn parse(text: &str, fallback: Option<Experiment>) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| config_err(format!("line {}: expected `key = value`", i + 1)))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        let experiment = match pairs.iter().find(|(k, _)| k == "experiment") {
            Some((_, v)) => v.parse()?,
            None => fallback.ok_or_else(|| config_err("no experiment given"))?,
        };
        let mut cfg = Config::new(experiment);
        for (k, v) in pairs {
            cfg.set(&k, &v)?;
        }
        Ok(cfg)
    }

    /// Apply one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "experiment" => {
                let e: Experiment = value.parse()?;
                if e != self.experiment {
                    return Err(config_err(format!(
                        "config is for {e}, but {} was requested",
                        self.experiment
                    )));
                }
            }
            "trials" => {
                self.trials = parse_num(key, value)?;
                if self.trials == 0 {
                    return Err(config_err("trials must be at least 1"));
                }
            }
            "seed" => self.seed = parse_num(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            "matrix_cap" => self.matrix_cap = parse_num(key, value)?,
            "timing" => self.timing = parse_bool(key, value)?,
            _ => {
                let allowed = crate::experiments::param_keys(self.experiment);
                if !allowed.contains(&key) {
                    return Err(config_err(format!(
                        "unknown key {key:?} for {}; expected one of {:?} or {:?}",
                        self.experiment, COMMON_KEYS, allowed
                    )));
                }
                self.params.insert(key.to_string(), value.to_string());
            }
        }
        Ok(())
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => parse_num(key, v),
        }
    }

    pub fn get_opt<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.raw(key).map(|v| parse_num(key, v)).transpose()
    }

    pub fn get_list<T: FromStr + Clone>(&self, key: &str, default: &[T]) -> Result<Vec<T>> {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| parse_num(key, s))
                .collect(),
        }
    }

    pub fn get_bool(&self, key: &str, default: bool) -> Result<bool> {
        self.raw(key).map_or(Ok(default), |v| parse_bool(key, v))
    }

    pub fn get_str<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.raw(key).unwrap_or(default)
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| config_err(format!("{key}: cannot parse {value:?}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(config_err(format!("{key}: expected true or false, got {value:?}"))),
    }
}
