//! `hs2`: simulations, curvature scans, blow-up sweeps, Jacobi fields and the
//! verification suite for the Hunter–Saxton family of geodesic equations.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 config error, 3 runtime error.

mod commands;
mod config;
mod error;
mod expr;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hs2_core::verification::{Level, VerifyOptions};

use crate::config::Overrides;
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "hs2", version, about = "Geodesic flows of the Hunter-Saxton family on semidirect products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CurvatureMode {
    Pair,
    Scan,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a geodesic from the identity; writes a CSV time series and a JSON summary.
    Simulate(Overrides),
    /// Sectional curvature of one plane (pair) or of seeded random planes (scan).
    Curvature {
        #[arg(value_enum)]
        mode: CurvatureMode,
        #[command(flatten)]
        run: Overrides,
    },
    /// Chart-exit times of HS profiles against the closed-form blow-up time.
    Blowup {
        #[command(flatten)]
        run: Overrides,
        /// Additional profile expression (must vanish at x = 0); repeatable.
        #[arg(long = "profile", allow_hyphen_values = true)]
        profiles: Vec<String>,
    },
    /// Norm of a Jacobi field with zero initial value along a geodesic.
    Jacobi(Overrides),
    /// Run the acceptance criteria and report pass/fail per criterion as JSON.
    Verify {
        #[arg(long, default_value = "quick", value_parser = parse_level)]
        level: Level,
        /// Metric weight of the first component; anything but 1 is a deliberate corruption.
        #[arg(long = "inject-h1-scale", default_value_t = 1.0)]
        h1_scale: f64,
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn parse_level(s: &str) -> Result<Level, String> {
    s.parse().map_err(|e: hs2_core::Error| e.to_string())
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("HS2_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Config(format!("HS2_THREADS = '{value}' is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Runtime(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Simulate(o) => commands::simulate(&o.resolve()?),
        Command::Curvature { mode: CurvatureMode::Pair, run } => commands::curvature_pair(&run.resolve()?),
        Command::Curvature { mode: CurvatureMode::Scan, run } => commands::curvature_scan(&run.resolve()?),
        Command::Blowup { run, profiles } => commands::blowup(&run.resolve()?, &profiles),
        Command::Jacobi(o) => commands::jacobi(&o.resolve()?),
        Command::Verify { level, h1_scale, seed, json } => commands::verify(level, h1_scale, seed, json.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hs2: {e}");
            e.exit_code()
        }
    }
}
