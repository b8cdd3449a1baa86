//! Config-driven experiments on top of `speclab-core`: config parsing,
//! parallel rung evaluation, JSON and CSV reports, and the `speclab` binary.

pub mod config;
pub mod experiment;
pub mod output;
pub mod presets;

use std::path::{Path, PathBuf};

pub use config::{ConfigError, ExperimentConfig};
pub use experiment::{execute, Outcome};

pub const REPORT_JSON: &str = "report.json";
pub const REPORT_CSV: &str = "report.csv";

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{path}: {source}")]
    Config { path: PathBuf, source: ConfigError },
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("invalid experiment: {0}")]
    Setup(String),
    #[error("cannot start thread pool: {0}")]
    Threads(String),
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, RunError> {
    let text = std::fs::read_to_string(path).map_err(|source| RunError::Read { path: path.into(), source })?;
    ExperimentConfig::parse(&text).map_err(|source| RunError::Config { path: path.into(), source })
}

/// Runs `cfg` and writes both reports into `out_dir`, creating it if needed.
pub fn run(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Outcome, RunError> {
    let outcome = execute(cfg).map_err(RunError::Setup)?;
    std::fs::create_dir_all(out_dir).map_err(|source| RunError::Write { path: out_dir.into(), source })?;
    for (name, bytes) in [(REPORT_JSON, outcome.json()), (REPORT_CSV, outcome.csv())] {
        let path = out_dir.join(name);
        output::write_atomic(&path, &bytes).map_err(|source| RunError::Write { path, source })?;
    }
    Ok(outcome)
}

/// Builds a rayon pool sized by `SPECLAB_THREADS` (all cores when unset).
pub fn thread_pool() -> Result<rayon::ThreadPool, RunError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("SPECLAB_THREADS") {
        let n: usize =
            v.trim().parse().map_err(|_| RunError::Threads(format!("SPECLAB_THREADS=`{v}` is not a count")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| RunError::Threads(e.to_string()))
}
