use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use speclab::{load_config, presets, run, thread_pool, RunError};

#[derive(Parser)]
#[command(
    name = "speclab",
    version,
    about = "Spectral experiments on finite sections of Jacobi and block Toeplitz matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write report.json and report.csv.
    Run {
        config: PathBuf,
        /// Output directory (overrides `out` in the config).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed (overrides `seed` in the config).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List presets, experiment kinds and config keys.
    Presets,
}

fn execute(config: PathBuf, out: Option<PathBuf>, seed: Option<u64>) -> Result<i32, RunError> {
    let mut cfg = load_config(&config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let dir = out.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("."));
    let pool = thread_pool()?;
    let outcome = pool.install(|| run(&cfg, &dir))?;
    let st = &outcome.report.status;
    for f in &st.solver_failures {
        eprintln!("solver failure: {} {}: {}", f.source, f.index, f.error);
    }
    for c in &st.failed_checks {
        eprintln!("failed check: {c}");
    }
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match cli.command {
        Command::Presets => {
            print!("{}", presets::listing());
            ExitCode::SUCCESS
        }
        Command::Run { config, out, seed } => match execute(config, out, seed) {
            Ok(code) => ExitCode::from(code as u8),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
    }
}
