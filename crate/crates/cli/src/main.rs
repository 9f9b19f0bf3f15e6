//! `ldpc-spectra`: exact spectra, growth rates, landmarks, bounds and
//! simulations for regular LDPC ensembles, as CSV or JSON.

mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use commands::*;
use output::{emit, Format};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "LDPC_SPECTRA_THREADS";

#[derive(Debug, Parser)]
#[command(name = "ldpc-spectra", version, about = "Weight spectra of regular LDPC code ensembles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format (defaults depend on the subcommand).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Master seed for random draws.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(untagged)]
enum Command {
    /// Exact average weight distribution E[A(l)], l = 0..n.
    Spectrum(SpectrumArgs),
    /// Growth rate omega(x) and its derivative on a grid.
    Growth(GrowthArgs),
    /// Distinguished points of the growth rate.
    Landmarks(EnsembleArgs),
    /// The inner function delta(x) on a grid.
    Delta(DeltaArgs),
    /// Monte-Carlo spectrum and minimum-distance statistics.
    Simulate(SimulateArgs),
    /// Exact ensemble average by enumerating every configuration.
    Exhaustive(ExhaustiveArgs),
    /// Small-x inequality margin and minimum-distance bound terms.
    Bounds(BoundsArgs),
    /// Gilbert-Varshamov distance and its approach by x0(2, d/2, d).
    GvLimit(GvArgs),
    /// Predefined curve tables (ids 1 to 5).
    Figure(FigureArgs),
    /// Scaling of E[A(l)] with n for a fixed small weight l.
    SmallWeight(SmallWeightArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Growth(_) => "growth",
            Command::Landmarks(_) => "landmarks",
            Command::Delta(_) => "delta",
            Command::Simulate(_) => "simulate",
            Command::Exhaustive(_) => "exhaustive",
            Command::Bounds(_) => "bounds",
            Command::GvLimit(_) => "gv-limit",
            Command::Figure(_) => "figure",
            Command::SmallWeight(_) => "small-weight",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Spectrum(_)
            | Command::Growth(_)
            | Command::Delta(_)
            | Command::Figure(_)
            | Command::SmallWeight(_) => Format::Csv,
            _ => Format::Json,
        }
    }
}

/// Failure classes and their exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Failure {
    Usage,
    Parameter,
    Domain,
    Capacity,
    Io,
    /// Reader closed standard output early; not reported.
    ClosedPipe,
}

impl Failure {
    fn code(self) -> &'static str {
        match self {
            Failure::Usage => "usage_error",
            Failure::Parameter => "parameter_error",
            Failure::Domain => "domain_error",
            Failure::Capacity => "capacity_error",
            Failure::Io | Failure::ClosedPipe => "io_error",
        }
    }

    fn exit_code(self) -> u8 {
        match self {
            Failure::Usage | Failure::Parameter | Failure::Domain => 2,
            Failure::Capacity => 3,
            Failure::Io => 1,
            Failure::ClosedPipe => 0,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Failure,
    pub message: String,
}

impl CliError {
    pub fn new(kind: Failure, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
        }
    }
}

impl From<ldpc_spectra::Error> for CliError {
    fn from(e: ldpc_spectra::Error) -> Self {
        let kind = match e {
            ldpc_spectra::Error::Parameter(_) => Failure::Parameter,
            ldpc_spectra::Error::Domain(_) => Failure::Domain,
            ldpc_spectra::Error::Capacity(_) => Failure::Capacity,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        let kind = if e.kind() == std::io::ErrorKind::BrokenPipe {
            Failure::ClosedPipe
        } else {
            Failure::Io
        };
        CliError::new(kind, e.to_string())
    }
}

fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::new(
                Failure::Parameter,
                format!("{THREADS_ENV} must be a positive integer (got {v:?})"),
            )),
        },
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cap = thread_cap()?;
    if let Some(n) = cap {
        // fails only if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let format = cli.format.unwrap_or_else(|| cli.command.default_format());
    let ctx = Context { seed: cli.seed, thread_cap: cap };
    let result = match &cli.command {
        Command::Spectrum(a) => spectrum(a)?,
        Command::Growth(a) => growth(a)?,
        Command::Landmarks(a) => landmarks(a)?,
        Command::Delta(a) => delta(a)?,
        Command::Simulate(a) => simulate(a, &ctx)?,
        Command::Exhaustive(a) => exhaustive(a)?,
        Command::Bounds(a) => bounds(a)?,
        Command::GvLimit(a) => gv_limit(a)?,
        Command::Figure(a) => figure(a)?,
        Command::SmallWeight(a) => small_weight(a)?,
    };
    let params = serde_json::to_value(&cli.command).map_err(|e| CliError::new(Failure::Io, e.to_string()))?;
    emit(cli.command.name(), params, cli.seed, format, &result, cli.output.as_deref())
}

fn report_error(e: &CliError) -> ExitCode {
    if e.kind == Failure::ClosedPipe {
        return ExitCode::SUCCESS;
    }
    let body = serde_json::json!({ "code": e.kind.code(), "message": e.message });
    let _ = writeln!(std::io::stderr(), "{body}");
    ExitCode::from(e.kind.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            let first = first.trim_start_matches("error: ");
            return report_error(&CliError::new(Failure::Usage, first));
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report_error(&e),
    }
}
