//! Command line front end.
//!
//! Exit codes: 0 on success, 1 for configuration or usage problems
//! (including validation failures), 2 when a numerical evaluation failed.

use casimag::config::{OutputFormat, RunConfig};
use casimag::run::{configure_threads, execute, output_path, RunError, RunOptions, Task};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "casimag",
    version,
    about = "Casimir energies, forces and magnetic anisotropy between mirrors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Write output here instead of the path from the configuration (or stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format, overriding the configuration.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Relative quadrature tolerance, overriding the configuration.
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Number of worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Total interaction energy and pressure over the configured distances.
    Energy(CommonArgs),
    /// Orientation decomposition of energy and pressure per distance.
    Decompose(CommonArgs),
    /// Anisotropy energy versus in-plane angle at one distance.
    ScanAngle(CommonArgs),
    /// Anisotropy amplitude, class and crossovers versus distance.
    ScanDistance(CommonArgs),
    /// Check a configuration and report diagnostics without computing.
    Validate(CommonArgs),
}

impl Command {
    fn split(self) -> (Task, CommonArgs) {
        match self {
            Command::Energy(a) => (Task::Energy, a),
            Command::Decompose(a) => (Task::Decompose, a),
            Command::ScanAngle(a) => (Task::ScanAngle, a),
            Command::ScanDistance(a) => (Task::ScanDistance, a),
            Command::Validate(a) => (Task::Validate, a),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes, not usage errors.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let (task, args) = cli.command.split();
    configure_threads(args.threads);
    let config = match RunConfig::from_path(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let opts = RunOptions {
        format: args.format.map(Into::into),
        out_path: args.out,
        rel_tol: args.rel_tol,
    };
    let outcome = match execute(task, &config, &opts) {
        Ok(o) => o,
        Err(RunError::Config(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match output_path(&config, &opts) {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &outcome.text) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{}", outcome.text),
    }
    for f in &outcome.failures {
        eprintln!("warning: {f}");
    }
    if task == Task::Validate && outcome.has_errors {
        return ExitCode::from(1);
    }
    if !outcome.failures.is_empty() {
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
