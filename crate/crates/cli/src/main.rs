//! `fieldline`: trajectories, field tables, cross-validation reports, and
//! radial spin spectra for a separable family of non-uniform magnetic
//! fields, driven by a JSON run configuration.

mod commands;
mod config;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Overrides;
use config::RunConfig;

/// Exit codes: 0 success, 2 configuration error, 3 numeric failure,
/// 4 internal invariant violation.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
    Invariant(String),
    Io(String),
}

impl CliError {
    pub fn config(msg: String) -> Self {
        CliError::Config(msg)
    }

    pub fn numeric(msg: String) -> Self {
        CliError::Numeric(msg)
    }

    pub fn io(msg: String) -> Self {
        CliError::Io(msg)
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numeric(m) | CliError::Invariant(m) | CliError::Io(m) => m,
        }
    }
}

impl From<fieldline_core::Error> for CliError {
    fn from(e: fieldline_core::Error) -> Self {
        match e {
            fieldline_core::Error::Config(m) => CliError::Config(m),
            fieldline_core::Error::InvariantBreach(m) => CliError::Invariant(m),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "fieldline",
    about = "Charged-particle trajectories and spin spectra in separable non-uniform magnetic fields",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a trajectory and write CSV/JSON (and SVG with --plot).
    Trajectory(RunArgs),
    /// Tabulate the shape function and field over a grid.
    Field(RunArgs),
    /// Radial spin analysis: zero mode, normalizability verdict, spectrum.
    Susy(RunArgs),
    /// Cross-validate two or more trajectory methods.
    Compare(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Also emit an SVG plot of the trajectory.
    #[arg(long)]
    plot: bool,
    /// Output directory (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Method selector (overrides the config): quadrature, closed-form,
    /// ode, all, or a comma list.
    #[arg(long)]
    method: Option<String>,
}

type Runner = fn(&RunConfig, &Overrides) -> Result<(), CliError>;

fn run(cli: Cli) -> Result<(), CliError> {
    let (args, runner): (&RunArgs, Runner) = match &cli.command {
        Command::Trajectory(a) => (a, commands::cmd_trajectory),
        Command::Field(a) => (a, commands::cmd_field),
        Command::Susy(a) => (a, commands::cmd_susy),
        Command::Compare(a) => (a, commands::cmd_compare),
    };
    let config = RunConfig::load(&args.config)?;
    let overrides =
        Overrides { out: args.out.clone(), method: args.method.clone(), plot: args.plot };
    if let Some(m) = &overrides.method {
        // Validate the override with the same rules as the config field.
        for name in m.split(',') {
            let name = name.trim();
            if !["quadrature", "closed-form", "ode", "all"].contains(&name) {
                return Err(CliError::config(format!("unknown method '{name}'")));
            }
        }
    }
    runner(&config, &overrides)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
