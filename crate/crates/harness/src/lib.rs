//! Experiment harness: configuration, seeded instance generation, runners
//! for every experiment and CSV/JSON output.

pub mod config;
pub mod error;
pub mod experiments;
pub mod record;
pub mod sampling;

use std::fs;
use std::path::{Path, PathBuf};

pub use config::{Config, Experiment, Format};
pub use error::{HarnessError, Result};
pub use record::Table;

/// Run an experiment, using `threads` workers (0 = rayon's default).
pub fn run(cfg: &Config, threads: usize) -> Result<Table> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| error::config_err(format!("thread pool: {e}")))?;
    pool.install(|| experiments::run(cfg))
}

pub fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    }
}

/// Schema file written next to `out`.
pub fn schema_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".schema.txt");
    PathBuf::from(s)
}

/// Write the rendered table and its schema; without `out` the table goes to
/// stdout and no schema is written.
pub fn write_output(table: &Table, cfg: &Config) -> Result<()> {
    let text = render(table, cfg.format);
    match &cfg.out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            write_file(path, &text)?;
            write_file(&schema_path(path), &table.schema())
        }
    }
}

pub(crate) fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| HarnessError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}
