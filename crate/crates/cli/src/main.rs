//! `qrmt`: sampling, analytic curves, figure reproduction and invariant
//! checks for q-generalized random matrix ensembles.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 parameter error, 3 I/O
//! error, 4 acceptance failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod error;
mod output;
mod svg;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::{DensityArgs, ElementArgs, GapArgs, ReproduceArgs, SampleArgs};
use crate::error::{CliError, CliResult};
use crate::output::check_manifest;
use crate::verify::{run_suite, tap_report, Check, Suite};

#[derive(Debug, Parser)]
#[command(name = "qrmt", version, about = "q-generalized random matrix ensembles")]
struct Cli {
    /// Worker threads; 0 uses every available core. Output does not depend on it.
    #[arg(long, global = true, env = "QRMT_THREADS", default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw matrices and write their sorted spectra.
    Sample(SampleArgs),
    /// Tabulate the level density.
    Density(DensityArgs),
    /// Tabulate the density (or characteristic function) of one matrix element.
    Element(ElementArgs),
    /// Tabulate the gap probability against the mean level count.
    Gap(GapArgs),
    /// Regenerate a reference figure with its acceptance report.
    Reproduce(ReproduceArgs),
    /// Run invariant suites and/or re-hash a run manifest; prints TAP.
    Verify(VerifyArgs),
}

#[derive(Debug, clap::Args)]
struct VerifyArgs {
    /// Suite to run; defaults to `all` unless only `--manifest` is given.
    #[arg(long, value_enum)]
    suite: Option<Suite>,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Override every check's tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Manifest whose output digests are re-checked.
    #[arg(long)]
    manifest: Vec<PathBuf>,
}

fn command_line() -> String {
    let mut parts = vec!["qrmt".to_string()];
    parts.extend(std::env::args().skip(1));
    parts.join(" ")
}

fn verify(a: &VerifyArgs) -> CliResult<()> {
    let suite = a.suite.or(if a.manifest.is_empty() { Some(Suite::All) } else { None });
    let mut checks = match suite {
        Some(s) => run_suite(s, a.seed)?,
        None => Vec::new(),
    };
    for m in &a.manifest {
        for d in check_manifest(m)? {
            let name = format!("{} in {}: {}", d.path, m.display(), d.detail);
            checks.push(Check { suite: "manifest", name, deviation: if d.ok { 0.0 } else { 1.0 }, tolerance: 0.0 });
        }
    }
    let (report, failed) = tap_report(&mut checks, a.tolerance);
    print!("{report}");
    if failed > 0 {
        return Err(CliError::Acceptance(format!("{failed} of {} checks failed", checks.len())));
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .map_err(|e| CliError::Numeric(format!("thread pool: {e}")))?;
    let line = command_line();
    match &cli.command {
        Command::Sample(a) => commands::sample(a, line),
        Command::Density(a) => commands::density(a, line),
        Command::Element(a) => commands::element(a, line),
        Command::Gap(a) => commands::gap(a, line),
        Command::Reproduce(a) => commands::reproduce(a, line),
        Command::Verify(a) => verify(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
