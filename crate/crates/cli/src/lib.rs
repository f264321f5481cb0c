//! IO layer of the simulator: configuration, CSV and manifest writers, plot
//! rendering, and the four CLI commands. All numerics live in `cvmdi-core`;
//! this crate only arranges grids, fans cells out to worker threads, and
//! serializes the results.

pub mod commands;
pub mod config;
pub mod csvio;
pub mod manifest;
pub mod plot;
pub mod runner;

use std::fmt;

/// Command outcomes map onto process exit codes: 0 success, 1 validation or
/// runtime failure, 2 usage error.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(anyhow::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Runtime(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

impl From<cvmdi_core::Error> for CliError {
    fn from(e: cvmdi_core::Error) -> Self {
        CliError::Runtime(anyhow::anyhow!(e))
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage_error<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}
