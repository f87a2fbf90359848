//! Command-line front end for the spline affine system library.
//!
//! Exit codes: 0 success (for `verify`: every check passed), 1 computation
//! failure, 2 invalid arguments.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Sink;

/// Resource guards: beyond these the exact-arithmetic cost grows steeply
/// (coefficient bit lengths scale with 2^{m(m+5)/2}).
const MAX_M: u64 = 8;
const MAX_DEPTH: u64 = 10;
const MAX_INDEX_CAP: u64 = 1 << 16;

#[derive(Parser)]
#[command(
    name = "spline-affine",
    about = "Exact spline affine systems: construction, chaos decomposition, Riesz certificates",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutArg {
    /// Write the report to this file (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a spline generator as CSV, or dump its exact data as JSON.
    Spline {
        /// Spline order.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=MAX_M))]
        m: u64,
        /// Number of sample intervals; S+1 equispaced points are emitted.
        #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..=1_048_576))]
        samples: u64,
        /// Emit the exact piecewise representation as JSON instead of CSV.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Index table: word, Paley index, natural index, chaos order.
    Enum {
        /// Include all words up to this length.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..=MAX_DEPTH))]
        depth: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Exact Walsh coefficient table grouped by chaos order.
    Chaos {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=MAX_M))]
        m: u64,
        /// Truncation index of the coefficient table.
        #[arg(long = "max-index", default_value_t = 4096, value_parser = clap::value_parser!(u64).range(7..=MAX_INDEX_CAP))]
        max_index: u64,
        /// Emit CSV rows plus a comment summary instead of JSON.
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        /// Emit JSON (the default).
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Full certification run for one order, as JSON.
    Riesz {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=MAX_M))]
        m: u64,
        /// Section size is 2^depth.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..=MAX_DEPTH))]
        depth: u64,
        #[arg(long = "max-index", default_value_t = 4096, value_parser = clap::value_parser!(u64).range(7..=MAX_INDEX_CAP))]
        max_index: u64,
        /// Eigensolver off-diagonal tolerance.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Exact Gram matrix entries as a+b*sqrt2 strings (m = 0: Haar system).
    Gram {
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=MAX_M))]
        m: u64,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..=MAX_DEPTH))]
        depth: u64,
        /// CSV is the only format; the flag is accepted for symmetry.
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run every certificate for m = 1..=M and print a pass/fail table.
    Verify {
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=MAX_M))]
        m: u64,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..=MAX_DEPTH))]
        depth: u64,
        #[arg(long = "max-index", default_value_t = 4096, value_parser = clap::value_parser!(u64).range(7..=MAX_INDEX_CAP))]
        max_index: u64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        out: OutArg,
    },
}

fn init_thread_pool() -> Result<(), String> {
    if let Ok(raw) = std::env::var("SPLINE_AFFINE_THREADS") {
        let n: usize = raw
            .parse()
            .map_err(|_| format!("SPLINE_AFFINE_THREADS must be a positive integer, got {raw:?}"))?;
        if n == 0 {
            return Err("SPLINE_AFFINE_THREADS must be at least 1".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| format!("thread pool: {e}"))?;
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<(), String> {
    if tol.is_finite() && tol > 0.0 && tol <= 0.1 {
        Ok(())
    } else {
        Err(format!("--tol must be in (0, 0.1], got {tol}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = init_thread_pool() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }

    let run = || -> Result<(String, bool), RunError> {
        match cli.command {
            Command::Spline { m, samples, json, ref out } => {
                let text = commands::spline_report(m as u32, samples, json)?;
                emit(out, text)
            }
            Command::Enum { depth, ref out } => {
                let text = commands::enum_report(depth as u32)?;
                emit(out, text)
            }
            Command::Chaos { m, max_index, csv, json: _, ref out } => {
                let text = commands::chaos_report(m as u32, max_index, csv)?;
                emit(out, text)
            }
            Command::Riesz { m, depth, max_index, tol, ref out } => {
                check_tol(tol).map_err(RunError::Usage)?;
                let text = commands::riesz_report(m as u32, depth as u32, max_index, tol)?;
                emit(out, text)
            }
            Command::Gram { m, depth, csv: _, ref out } => {
                let text = commands::gram_report(m as u32, depth as u32)?;
                emit(out, text)
            }
            Command::Verify { m, depth, max_index, tol, ref out } => {
                check_tol(tol).map_err(RunError::Usage)?;
                let (text, all_pass) = commands::verify_report(m as u32, depth as u32, max_index, tol)?;
                let (_, _) = emit(out, text)?;
                Ok((String::new(), all_pass))
            }
        }
    };

    match run() {
        Ok((_, true)) => ExitCode::SUCCESS,
        Ok((_, false)) => ExitCode::from(1),
        Err(RunError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(RunError::Computation(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

enum RunError {
    Usage(String),
    Computation(anyhow::Error),
}

impl From<anyhow::Error> for RunError {
    fn from(err: anyhow::Error) -> Self {
        RunError::Computation(err)
    }
}

fn emit(out: &OutArg, text: String) -> Result<(String, bool), RunError> {
    Sink::new(out.out.clone())
        .write(&text)
        .map_err(RunError::Computation)?;
    Ok((String::new(), true))
}
