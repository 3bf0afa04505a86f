use std::path::PathBuf;

use thiserror::Error;

/// Failures of a CLI run, each mapped to a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Param(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Acceptance(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Param(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Acceptance(_) => 4,
            CliError::Numeric(_) => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<qrmt::ParamError> for CliError {
    fn from(e: qrmt::ParamError) -> Self {
        CliError::Param(e.to_string())
    }
}

impl From<qrmt::NumericError> for CliError {
    fn from(e: qrmt::NumericError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<qrmt::Error> for CliError {
    fn from(e: qrmt::Error) -> Self {
        match e {
            qrmt::Error::Param(p) => p.into(),
            e @ (qrmt::Error::WrongRegime { .. } | qrmt::Error::MomentDivergence { .. } | qrmt::Error::Invalid(_)) => {
                CliError::Param(e.to_string())
            }
            e @ qrmt::Error::Numeric(_) => CliError::Numeric(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
