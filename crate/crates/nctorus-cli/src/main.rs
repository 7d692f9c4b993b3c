//! `nctorus` command-line front end.
//!
//! Exit codes: 0 success (verification passed where applicable), 1 a
//! verification verdict failed, 2 bad input or an infeasible construction.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

#[derive(Parser)]
#[command(
    name = "nctorus",
    version,
    about = "Build, verify, and plot projections in the noncommutative 2-torus algebra"
)]
struct Cli {
    /// Seed fixing the oracle test-function phases and probe points.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an element from a projection spec file and write it as JSON.
    Build {
        /// Projection spec (JSON).
        spec: PathBuf,
        /// Output element file; defaults to the spec path with the
        /// extension replaced by `element.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every defining equation of an element and write a report.
    Verify {
        /// Element file (JSON).
        element: PathBuf,
        /// Residual tolerance (default 1e-9; NCTORUS_TOL overrides it).
        #[arg(long)]
        tol: Option<f64>,
        /// Samples per unit interval for the residual grids.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        oracle_trials: Option<usize>,
        #[arg(long)]
        oracle_probes: Option<usize>,
        /// Report file; defaults to the element path plus `.report.json`.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Sample each nonzero band of an element into `x,value` CSV files.
    Plot {
        /// Element file (JSON).
        element: PathBuf,
        /// Uniform grid resolution (breakpoints are always included).
        #[arg(long, default_value_t = 1024)]
        resolution: usize,
        /// Output directory for the CSV files (default: current directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and verify across a sweep of the bump deformation parameter.
    Homotopy {
        /// Projection spec (JSON) containing a boundary-one bump edit.
        spec: PathBuf,
        /// Number of evenly spaced parameter values in [0, 1].
        #[arg(long, default_value_t = 11)]
        steps: usize,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Tabulate trace and K0 label of the base projections for M = 1..m-max.
    K0Sweep {
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = 10)]
        m_max: i32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = cli.seed;
    let outcome = match cli.command {
        Command::Build { spec, out } => commands::cmd_build(&spec, out.as_deref()),
        Command::Verify {
            element,
            tol,
            samples,
            oracle_trials,
            oracle_probes,
            report,
        } => commands::cmd_verify(
            &element,
            commands::VerifyOptions {
                tol,
                samples,
                oracle_trials,
                oracle_probes,
                seed,
                report: report.clone(),
            },
        ),
        Command::Plot {
            element,
            resolution,
            out,
        } => commands::cmd_plot(&element, resolution, out.as_deref()),
        Command::Homotopy { spec, steps, tol } => commands::cmd_homotopy(&spec, steps, tol, seed),
        Command::K0Sweep { theta, m_max } => commands::cmd_k0_sweep(theta, m_max),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
