mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical divergence at t = {time} (last good t = {last_good})")]
    Divergence { time: f64, last_good: f64 },
    #[error(transparent)]
    Core(#[from] csgauge_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(csgauge_core::Error::InvalidGrid { .. } | csgauge_core::Error::Precondition(_)) => 2,
            CliError::Divergence { .. } | CliError::Core(csgauge_core::Error::Divergence { .. }) => 3,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "csgauge", version, about = "Chern-Simons gauge field toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Worker threads; falls back to CSGAUGE_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Evolve a system and write diagnostics and snapshots.
    Simulate,
    /// Scan the product-estimate feasibility region.
    Feasibility,
    /// Null-form dominance study and angle probes.
    Nullforms,
    /// Space-time norms of a snapshot sequence.
    Norms,
}

fn threads(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("CSGAUGE_THREADS") {
        Ok(v) => v
            .parse()
            .map(Some)
            .map_err(|_| CliError::Config(format!("CSGAUGE_THREADS is not a count: {v}"))),
        Err(_) => Ok(None),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = threads(cli.threads)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let path = cli.config.as_deref().ok_or_else(|| CliError::Config("--config is required".into()))?;
    std::fs::create_dir_all(&cli.out)?;
    match cli.command {
        Command::Simulate => commands::simulate(&config::load(path)?, &cli.out),
        Command::Feasibility => commands::feasibility(&config::load(path)?, &cli.out),
        Command::Nullforms => commands::nullforms(&config::load(path)?, &cli.out),
        Command::Norms => commands::norms(&config::load(path)?, &cli.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("csgauge: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
