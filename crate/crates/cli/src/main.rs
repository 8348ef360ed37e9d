//! Command-line front end: Hermite tables, critical angles, nodal tracing,
//! θ sweeps and Courant tables, written as CSV, JSON and SVG.
//!
//! Every command prints a JSON report on stdout. The exit code is 0 when all
//! verifications of the run passed, 1 when some failed (the report lists
//! them under `"failures"`), and 2 on usage or input errors.

mod commands;
mod config;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "qho-nodal", version, about = "Nodal sets of 2D harmonic oscillator superpositions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Degree n of the superposition (odd for theorem commands).
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Angle θ in radians.
    #[arg(long, global = true, allow_hyphen_values = true, conflicts_with = "theta_over_pi")]
    pub theta: Option<f64>,
    /// Angle as a multiple of π, e.g. `3/4` or `0.375`.
    #[arg(long, global = true)]
    pub theta_over_pi: Option<String>,
    /// Base grid cells across the tracing box.
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    /// Margin factor applied to the barrier box.
    #[arg(long, global = true)]
    pub margin: Option<f64>,
    /// Seed for random sampling.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for output files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Path of the SVG figure (`trace`).
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    /// Report counts even when they change under refinement.
    #[arg(long, global = true)]
    pub allow_unstable: bool,
    /// `key = value` file with defaults for any of these flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Zeros of H_n and identity checks.
    Hermite,
    /// Critical angle table, θ_c and regular intervals.
    Critical,
    /// Trace the nodal set of Φ^θ_n and count its domains.
    Trace,
    /// Trace a list of angles and check the theorem predictions.
    Sweep {
        /// Comma-separated angles in radians, or `auto` for the midpoints of
        /// all regular intervals plus all critical angles.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "thetas_over_pi")]
        thetas: Option<String>,
        /// Comma-separated angles as multiples of π.
        #[arg(long)]
        thetas_over_pi: Option<String>,
    },
    /// Courant and parity-improved bounds, optionally with random samples.
    Courant {
        /// Largest eigenspace index ℓ in the table.
        #[arg(long)]
        l_max: Option<usize>,
        /// Random elements per eigenspace for the empirical check.
        #[arg(long)]
        samples: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(outcome) => {
            // a closed pipe (e.g. `| head`) is not an error of the run
            let _ = writeln!(std::io::stdout(), "{}", outcome.stdout);
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
