//! Command-line surface and verification harness for `ffhgf`.
//!
//! The library half holds everything the `ffhgf` binary does, so that the
//! acceptance harness and the integration tests can drive it directly:
//! argument parsing ([`args`]), the evaluation subcommands ([`commands`]),
//! the named verification suites ([`suites`]) and their JSON/CSV reports
//! ([`report`]).

pub mod args;
pub mod commands;
pub mod config;
pub mod report;
pub mod sample;
pub mod suites;

pub use config::{Samples, SuiteConfig};
pub use report::{Record, Report, Tally};
pub use suites::{run_criterion, run_suite, Criterion, SUITES};

/// Errors surfaced to the command line.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ffhgf::Error),
    #[error("malformed argument: {0}")]
    Parse(String),
    #[error("unknown suite {0:?} (known: {1})")]
    UnknownSuite(String, String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}
