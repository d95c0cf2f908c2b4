//! Command-line front end: argument parsing, problem loading and report
//! emission for the `tsspec` binary.

pub mod commands;
pub mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tsspec_core::io::BackendName;

pub use report::{ReportBundle, Table};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(name = "tsspec", version, about = "Spectral problems for Sturm-Liouville equations on time scales")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Problem file (intervals, potential, options).
    #[arg(long, global = true)]
    pub problem: Option<PathBuf>,
    /// Spectral-data file, or a `forward` report containing one.
    #[arg(long, global = true)]
    pub data: Option<PathBuf>,
    /// Boundary condition index at the right end.
    #[arg(long, global = true, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub j: Option<u8>,
    #[arg(long = "n-max", global = true)]
    pub n_max: Option<usize>,
    #[arg(long = "lambda-max", global = true)]
    pub lambda_max: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub backend: Option<BackendArg>,
    /// Worker threads for the numeric kernels (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write the command's table (samples, spectrum, trace or residuals).
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Relative tolerance of integration and root polishing.
    #[arg(long, global = true, env = "TSSPEC_TOLERANCE")]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Characteristic functions: exact coefficients or sampled values.
    Forward,
    /// Eigenvalues of the j problem, with weight numbers for j = 1.
    Spectrum,
    /// Weight numbers and the norm identity check.
    Weights,
    /// Weyl function as a ratio or as poles and residues.
    Weyl,
    /// Recover the potential of a discrete scale from spectral data.
    Inverse,
    /// Eigenvalue and weight residuals against the branch predictions.
    Asymptotics,
    /// Forward, extract each data kind, recover and compare.
    Roundtrip,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Forward => "forward",
            Command::Spectrum => "spectrum",
            Command::Weights => "weights",
            Command::Weyl => "weyl",
            Command::Inverse => "inverse",
            Command::Asymptotics => "asymptotics",
            Command::Roundtrip => "roundtrip",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Numeric,
}

impl From<BackendArg> for BackendName {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Exact => BackendName::Exact,
            BackendArg::Numeric => BackendName::Numeric,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] tsspec_core::Error),
    #[error("{path}: {source}")]
    InFile { path: String, source: tsspec_core::Error },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("roundtrip did not reproduce the potential for: {0}")]
    RoundtripMismatch(String),
}

impl CliError {
    pub fn is_validation(&self) -> bool {
        match self {
            CliError::Core(e) | CliError::InFile { source: e, .. } => e.is_validation(),
            CliError::Io { .. } | CliError::Usage(_) => true,
            CliError::RoundtripMismatch(_) => false,
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.is_validation() {
            2
        } else {
            3
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) | CliError::InFile { source: e, .. } => e.kind(),
            CliError::Io { .. } => "IoError",
            CliError::Usage(_) => "UsageError",
            CliError::RoundtripMismatch(_) => "RoundtripMismatch",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() } })
    }
}

/// Result of a command: the report, an optional table, and a failure that
/// still comes with a report (a roundtrip mismatch).
#[derive(Debug)]
pub struct Outcome {
    pub bundle: ReportBundle,
    pub table: Option<Table>,
    pub failure: Option<CliError>,
}

/// Runs the command on a thread pool sized by `--jobs`.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| commands::dispatch(cli))
}

fn write_outputs(cli: &Cli, outcome: &Outcome) -> Result<(), CliError> {
    let text = outcome.bundle.to_json();
    match &cli.out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?,
        None => println!("{text}"),
    }
    if let Some(path) = &cli.csv {
        match &outcome.table {
            Some(t) => t.write(path)?,
            None => return Err(CliError::Usage(format!("{} produces no table", cli.command.name()))),
        }
    }
    Ok(())
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code())
}

/// Runs the command, writes its outputs and maps failures to exit codes
/// (0 success, 2 validation, 3 computation) with a JSON error on stderr.
pub fn execute(cli: &Cli) -> ExitCode {
    let outcome = match run(cli) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    if let Err(e) = write_outputs(cli, &outcome) {
        return fail(&e);
    }
    match &outcome.failure {
        Some(e) => fail(e),
        None => ExitCode::SUCCESS,
    }
}
