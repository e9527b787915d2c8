//! Command-line driver for the reversible-map experiments.
//!
//! Each subcommand produces a [`Report`] that renders as one JSON document
//! (`{config, results, checks}`) or as a CSV table. Output depends only on
//! the arguments and seed, never on the number of workers.

pub mod args;
pub mod commands;
pub mod report;

use std::fmt;
use std::fs;
use std::io::{self, Write};

use args::{Cli, Format};
pub use report::{Check, Report};

/// Exit statuses.
pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_CAP: u8 = 3;
pub const EXIT_CHECK_FAILED: u8 = 4;

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Cap(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Cap(_) => EXIT_CAP,
            CliError::Invalid(_) | CliError::Io(_) => EXIT_INVALID,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid arguments: {m}"),
            CliError::Cap(m) => write!(f, "resource cap exceeded: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<revmap_core::Error> for CliError {
    fn from(e: revmap_core::Error) -> Self {
        match e {
            revmap_core::Error::ResourceCap { .. } => CliError::Cap(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

pub fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

/// Runs the selected command on a pool of the requested size.
pub fn build_report(cli: &Cli) -> Result<Report, CliError> {
    let workers = match cli.output.workers {
        Some(0) => return Err(invalid("--workers must be at least 1")),
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, usize::from),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| invalid(format!("cannot start worker pool: {e}")))?;
    pool.install(|| commands::run(&cli.command))
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Csv => report.table.to_csv(),
    }
}

/// Full driver: run, write output, and map the outcome to an exit status.
pub fn execute(cli: &Cli) -> Result<u8, CliError> {
    let report = build_report(cli)?;
    let text = render(&report, cli.output.resolved_format());
    match &cli.output.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    if !cli.output.check {
        return Ok(EXIT_OK);
    }
    let mut failed = false;
    for c in report.failed_checks() {
        eprintln!("check failed: {} = {} (bound {})", c.name, c.value, c.bound);
        failed = true;
    }
    Ok(if failed { EXIT_CHECK_FAILED } else { EXIT_OK })
}
