//! Experiment runner for arched-array spatial correlation and DoF analysis.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage/config error,
//! 3 numeric failure.

mod commands;
mod config;

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::{ExperimentConfig, Overrides};

/// CLI failure with its exit code mapping.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or invalid config, or guarded sizes: exit 2.
    Config(String),
    /// Output files could not be written: exit 2.
    Io(String),
    /// Quadrature or eigensolver failure: exit 3.
    Numeric(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Io(msg) => write!(f, "io error: {msg}"),
            CliError::Numeric(msg) => write!(f, "numeric error: {msg}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "arched-array",
    version,
    about = "Spatial correlation matrices, eigenvalue spectra and DoF sweeps \
             for arched antenna arrays"
)]
struct Cli {
    /// Experiment config (JSON), one experiment per file
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory (overrides the config's output_dir)
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Worker threads; defaults to all cores. Results do not depend on this.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form correlation matrix -> corr.csv
    Corr {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Eigenvalue spectrum and DoF report -> spectrum.csv, dof.json
    Spectrum {
        #[command(flatten)]
        overrides: Overrides,
        /// Decompose the complex quadrature-oracle matrix instead of the
        /// closed form (small arrays only)
        #[arg(long)]
        oracle: bool,
    },
    /// DoF metrics across the configured bend-angle sweep -> sweep.csv
    Sweep {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Closed form vs quadrature oracle -> validation.json; exits 1 if the
    /// max real error exceeds the configured bound
    Validate {
        #[command(flatten)]
        overrides: Overrides,
    },
}

impl Command {
    fn overrides(&self) -> &Overrides {
        match self {
            Command::Corr { overrides }
            | Command::Spectrum { overrides, .. }
            | Command::Sweep { overrides }
            | Command::Validate { overrides } => overrides,
        }
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config <PATH> is required".into()))?;
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("reading {}: {e}", path.display())))?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    cli.command.overrides().apply(&mut cfg)?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let cfg = load_config(cli)?;
    let out_dir = cli.out.clone().unwrap_or_else(|| cfg.output_dir.clone());
    fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", out_dir.display())))?;

    match &cli.command {
        Command::Corr { .. } => {
            let files = commands::cmd_corr(&cfg, &out_dir)?;
            announce(&files);
            Ok(0)
        }
        Command::Spectrum { oracle, .. } => {
            let files = commands::cmd_spectrum(&cfg, &out_dir, *oracle)?;
            announce(&files);
            Ok(0)
        }
        Command::Sweep { .. } => {
            let files = commands::cmd_sweep(&cfg, &out_dir)?;
            announce(&files);
            Ok(0)
        }
        Command::Validate { .. } => {
            let (files, report) = commands::cmd_validate(&cfg, &out_dir)?;
            announce(&files);
            println!(
                "validate: max |closed - Re(oracle)| = {:e}, max |Im(oracle)| = {:e} over {} pairs (bound {:e})",
                report.max_abs_real_error,
                report.max_abs_imag_part,
                report.pairs,
                cfg.validation_bound
            );
            if report.max_abs_real_error < cfg.validation_bound {
                Ok(0)
            } else {
                println!("validate: FAILED");
                Ok(1)
            }
        }
    }
}

fn announce(files: &[PathBuf]) {
    for f in files {
        println!("wrote {}", f.display());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
