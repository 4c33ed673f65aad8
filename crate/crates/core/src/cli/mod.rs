//! Command-line front end.
//!
//! Exit codes: 0 success, 2 configuration or usage error, 3 evaluation
//! error, 4 no verified solution, 5 kernel inequality violated.
//! Results go to stdout (JSON or CSV); diagnostics go to stderr.

pub mod commands;
pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

pub use commands::{
    interval_report, kernel_check, solution_csv, solve_report, sweep, sweep_csv, IntervalReport,
    KernelCheckReport, LambdaGrid, SolveReport, SweepRow,
};
pub use config::{ConfigError, ProblemConfig};

use crate::problem::BvpProblem;
use crate::solver::SolveStatus;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_EVAL: i32 = 3;
pub const EXIT_UNSOLVED: i32 = 4;
pub const EXIT_KERNEL: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "conebvp",
    version,
    about = "Positive solutions of u'' + lambda a(t) f(u) = 0, u'(0) = 0, u(1) = alpha int_0^eta u"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print Lambda1, Lambda2, gamma, f0, finf and the guaranteed lambda interval as JSON.
    Interval { config: PathBuf },
    /// Search for a verified positive solution; JSON report on stdout, solution as CSV.
    Solve {
        config: PathBuf,
        /// Overrides `lambda` from the config.
        #[arg(long)]
        lambda: Option<f64>,
        /// Where to write the `t,u` solution CSV.
        #[arg(long, default_value = "solution.csv")]
        out: PathBuf,
    },
    /// Solve for each lambda on a grid and print one CSV row per value.
    Sweep {
        config: PathBuf,
        /// `lo:hi:steps`, with `steps` evenly spaced values including both ends.
        #[arg(long = "lambda-grid")]
        lambda_grid: String,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the kernel inequalities and seam continuity; JSON report.
    KernelCheck {
        config: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

/// A failure that maps to a process exit code.
#[derive(Debug)]
pub struct CliFailure {
    pub code: i32,
    pub message: String,
}

impl CliFailure {
    fn config(message: impl ToString) -> Self {
        CliFailure {
            code: EXIT_CONFIG,
            message: message.to_string(),
        }
    }

    fn from_error(e: crate::Error) -> Self {
        let code = if commands::eval_exit_error(&e) {
            EXIT_EVAL
        } else {
            EXIT_CONFIG
        };
        CliFailure {
            code,
            message: e.to_string(),
        }
    }
}

/// Output of a successful command: what to print and the exit code.
#[derive(Debug)]
pub struct CommandOutput {
    pub stdout: String,
    pub stderr: Vec<String>,
    pub code: i32,
}

fn load(path: &Path) -> Result<BvpProblem, CliFailure> {
    ProblemConfig::load(path)
        .and_then(|c| c.to_problem())
        .map_err(CliFailure::config)
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliFailure> {
    std::fs::write(path, contents).map_err(|e| CliFailure {
        code: EXIT_CONFIG,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

/// Runs a parsed command without touching the process streams.
pub fn execute(command: &Command) -> Result<CommandOutput, CliFailure> {
    match command {
        Command::Interval { config } => {
            let problem = load(config)?;
            let report = interval_report(&problem).map_err(CliFailure::from_error)?;
            Ok(CommandOutput {
                stdout: to_json(&report),
                stderr: report
                    .warnings
                    .iter()
                    .map(|w| format!("warning: {w}"))
                    .collect(),
                code: EXIT_OK,
            })
        }
        Command::Solve {
            config,
            lambda,
            out,
        } => {
            let cfg = ProblemConfig::load(config).map_err(CliFailure::config)?;
            let problem = cfg.to_problem().map_err(CliFailure::config)?;
            let lambda = lambda.or(cfg.lambda).ok_or_else(|| {
                CliFailure::config("lambda must be given with --lambda or in the config")
            })?;
            if !(lambda > 0.0 && lambda.is_finite()) {
                return Err(CliFailure::config(format!(
                    "lambda must be positive, got {lambda}"
                )));
            }
            let (report, solution) =
                solve_report(&problem, lambda).map_err(CliFailure::from_error)?;
            let mut stderr: Vec<String> = report
                .warnings
                .iter()
                .map(|w| format!("warning: {w}"))
                .collect();
            if let Some(u) = &solution {
                write_file(out, &solution_csv(u))?;
                stderr.push(format!("wrote {} rows to {}", u.n() + 1, out.display()));
            }
            let code = if report.status == SolveStatus::Solved {
                EXIT_OK
            } else {
                EXIT_UNSOLVED
            };
            Ok(CommandOutput {
                stdout: to_json(&report),
                stderr,
                code,
            })
        }
        Command::Sweep {
            config,
            lambda_grid,
            out,
        } => {
            let grid = LambdaGrid::parse(lambda_grid).map_err(CliFailure::config)?;
            let problem = load(config)?;
            let (rows, warnings) = sweep(&problem, &grid);
            let csv = sweep_csv(&rows);
            let stderr = warnings.iter().map(|w| format!("warning: {w}")).collect();
            let stdout = match out {
                Some(path) => {
                    write_file(path, &csv)?;
                    String::new()
                }
                None => csv,
            };
            Ok(CommandOutput {
                stdout,
                stderr,
                code: EXIT_OK,
            })
        }
        Command::KernelCheck { config, samples } => {
            let problem = load(config)?;
            let report = kernel_check(&problem.params, *samples);
            let code = if report.passed { EXIT_OK } else { EXIT_KERNEL };
            Ok(CommandOutput {
                stdout: to_json(&report),
                stderr: Vec::new(),
                code,
            })
        }
    }
}

/// Parses arguments, runs the command, prints results and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let started = Instant::now();
    let result = execute(&cli.command);
    let mut err = std::io::stderr().lock();
    match result {
        Ok(output) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(output.stdout.as_bytes());
            let _ = out.flush();
            for line in &output.stderr {
                let _ = writeln!(err, "{line}");
            }
            let _ = writeln!(err, "finished in {:.3}s", started.elapsed().as_secs_f64());
            output.code
        }
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}
