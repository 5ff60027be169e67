//! Batch experiment driver: ingest a JSON experiment config, run a pipeline,
//! emit machine-readable CSV tables or JSON reports.
//!
//! Exit codes: 0 success, 1 usage, 2 parse, 3 cap exceeded, 4 property
//! violation.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use orbitlab::maps::MapBuildError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    CapExceeded(String),
    #[error("{0}")]
    Violation(String),
}

impl CliError {
    pub fn config(msg: String) -> Self {
        CliError::Parse(msg)
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::CapExceeded(_) => 3,
            CliError::Violation(_) => 4,
        }
    }
}

impl From<MapBuildError> for CliError {
    fn from(e: MapBuildError) -> Self {
        match e {
            // polynomial syntax errors carry line/column diagnostics
            MapBuildError::Parse { coord, source } => CliError::Parse(format!(
                "coordinate {}: line {}, column {}: {}",
                coord, source.line, source.column, source.message
            )),
            other => CliError::Parse(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "orbitlab",
    version,
    about = "Exact-arithmetic experiments on rational self-maps of projective space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Path to the JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config's rng_seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Degree sequence of the reduced iterates.
    Degrees(RunArgs),
    /// Dynamical degrees: certified intervals (monomial) or sequence bounds.
    Dyndeg(RunArgs),
    /// Per-step heights along one orbit.
    Orbit(RunArgs),
    /// Arithmetic-degree estimators for one orbit.
    Alpha(RunArgs),
    /// Dense-orbit criterion verdict for a birational monomial map.
    Zdo(RunArgs),
    /// Degree-law and height-bound property suites; nonzero exit on violation.
    Verify(RunArgs),
    /// Kernel dimensions of forms vanishing on an orbit, per degree.
    Interpolate(RunArgs),
    /// Stochastic search for seeds with near-maximal height growth.
    Search(RunArgs),
}

type Runner = fn(&config::LoadedConfig, Option<&std::path::Path>) -> Result<(), CliError>;

fn run(cli: Cli) -> Result<(), CliError> {
    let (args, runner): (&RunArgs, Runner) =
        match &cli.command {
            Command::Degrees(a) => (a, commands::cmd_degrees),
            Command::Dyndeg(a) => (a, commands::cmd_dyndeg),
            Command::Orbit(a) => (a, commands::cmd_orbit),
            Command::Alpha(a) => (a, commands::cmd_alpha),
            Command::Zdo(a) => (a, commands::cmd_zdo),
            Command::Verify(a) => (a, commands::cmd_verify),
            Command::Interpolate(a) => (a, commands::cmd_interpolate),
            Command::Search(a) => (a, commands::cmd_search),
        };
    let loaded = config::load_config(&args.config, args.seed)?;
    runner(&loaded, args.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("orbitlab: {}", e);
            ExitCode::from(e.exit_code())
        }
    }
}
