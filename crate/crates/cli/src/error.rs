use std::fmt;

use pepgrad_core::CoreError;

/// CLI failure modes with their stable exit codes: 0 success/verified,
/// 1 check failure or I/O, 2 usage, 3 regime, 4 solver failure.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Regime(String),
    Solver(String),
    Failed(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Regime(_) => 3,
            CliError::Solver(_) => 4,
            CliError::Failed(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Regime(m) => write!(f, "regime error: {m}"),
            CliError::Solver(m) => write!(f, "solver error: {m}"),
            CliError::Failed(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Regime { .. } => CliError::Regime(e.to_string()),
            CoreError::InvalidParameter(_)
            | CoreError::IndexOutOfRange { .. }
            | CoreError::DimensionMismatch { .. } => CliError::Usage(e.to_string()),
            CoreError::Solver(_) => CliError::Solver(e.to_string()),
            CoreError::NotInterpolable { .. } | CoreError::NotPsd { .. } | CoreError::Oracle(_) => {
                CliError::Failed(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(format!("json: {e}"))
    }
}

impl std::error::Error for CliError {}
