//! Command-line front end for co-design queries and LQG sweeps.

pub mod commands;
pub mod diagram;
pub mod error;
pub mod output;
pub mod schema;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use codesign_core::dpi::{SolveOptions, DEFAULT_MAX_ITER};

pub use commands::{cmd_lqg_sweep, cmd_solve, validate_path, Status, SweepArgs};
pub use error::CliError;
pub use schema::Format;

#[derive(Debug, Parser)]
#[command(
    name = "codesign",
    version,
    about = "Monotone co-design queries and LQG trade-off sweeps"
)]
pub struct Cli {
    /// Kleene iteration limit for `solve`.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    /// Relative tolerance for closed-form agreement in `lqg-sweep`.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a query file and write its Pareto fronts.
    Solve {
        query: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Overrides the query file's format.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Tracking error and control effort of a continuous plant over α.
    LqgSweep {
        system: PathBuf,
        /// `lo:hi:n`, log-spaced.
        #[arg(long)]
        alpha: String,
        /// Observation-noise scalings.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        v: Vec<f64>,
        /// Process-noise scalings.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        w: Vec<f64>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Schema-check catalogs, diagrams, queries and plant files.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

/// Runs a parsed command line; returns the process exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let opts = SolveOptions { max_iter: cli.max_iter };
    let fail = |stderr: &mut dyn Write, e: CliError| {
        let _ = writeln!(stderr, "error: {e}");
        1
    };
    match cli.command {
        Command::Solve { query, out, format } => match cmd_solve(&query, &out, format, &opts) {
            Ok((status, dest)) => {
                if status == Status::Infeasible {
                    let _ = writeln!(stderr, "{}: infeasible at every query point", query.display());
                }
                let _ = writeln!(stdout, "{}", dest.display());
                status.code()
            }
            Err(e) => fail(stderr, e),
        },
        Command::LqgSweep {
            system,
            alpha,
            v,
            w,
            out,
            format,
        } => {
            let args = SweepArgs {
                system: &system,
                alpha: &alpha,
                v: &v,
                w: &w,
                tol: cli.tol,
                format,
            };
            match cmd_lqg_sweep(&args) {
                Ok((bytes, warnings)) => {
                    for m in warnings {
                        let _ = writeln!(stderr, "warning: {}: {m}", system.display());
                    }
                    let written = match &out {
                        Some(p) => {
                            std::fs::write(p, &bytes).map_err(|e| CliError::in_file(p, format!("cannot write: {e}")))
                        }
                        None => stdout.write_all(&bytes).map_err(|e| CliError::new(e.to_string())),
                    };
                    match written {
                        Ok(()) => 0,
                        Err(e) => fail(stderr, e),
                    }
                }
                Err(e) => fail(stderr, e),
            }
        }
        Command::Validate { paths } => {
            let mut code = 0;
            for p in &paths {
                match validate_path(p) {
                    Ok(kind) => {
                        let _ = writeln!(stdout, "ok: {} ({kind:?})", p.display());
                    }
                    Err(e) => code = fail(stderr, e),
                }
            }
            code
        }
    }
}
