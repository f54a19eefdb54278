//! Error type mapping failures onto the process exit codes:
//! 0 success, 1 usage error, 2 runtime failure.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, malformed config values, inconsistent options.
    Usage(String),
    /// I/O failures, solver divergence, malformed inputs discovered mid-run.
    Runtime(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        CliError::Runtime(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Runtime(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<oger_core::pgm::PgmError> for CliError {
    fn from(e: oger_core::pgm::PgmError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<oger_core::mask::MaskError> for CliError {
    fn from(e: oger_core::mask::MaskError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<oger_core::solver::SolverError> for CliError {
    fn from(e: oger_core::solver::SolverError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<oger_core::metrics::MetricsError> for CliError {
    fn from(e: oger_core::metrics::MetricsError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<oger_core::matrix::MatrixError> for CliError {
    fn from(e: oger_core::matrix::MatrixError) -> Self {
        CliError::Runtime(e.to_string())
    }
}
