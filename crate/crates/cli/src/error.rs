use std::path::Path;
use std::process::ExitCode;

use thiserror::Error;
use whap_core::{FactorizationError, OperatorError, ParseError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{source}\n  {text}\n  {marker}^", marker = " ".repeat(.source.offset()))]
    Parse { text: String, source: ParseError },
    #[error("factorization failed: {0}")]
    Factorization(#[from] FactorizationError),
    #[error("{path}: unusable factorization: {message}")]
    InvalidFactorization { path: String, message: String },
    #[error("inversion failed: {0}")]
    Inversion(OperatorError),
    #[error("{0}")]
    Hypothesis(OperatorError),
    #[error("operator error: {0}")]
    Operator(OperatorError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError::Input {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Parse { .. } => 2,
            CliError::Factorization(_) | CliError::InvalidFactorization { .. } => 3,
            CliError::Inversion(_) => 4,
            CliError::Hypothesis(_) => 5,
            CliError::Operator(_) | CliError::Config(_) | CliError::Input { .. } | CliError::Usage(_) => 1,
        })
    }
}

impl From<OperatorError> for CliError {
    fn from(e: OperatorError) -> Self {
        match e {
            OperatorError::HypothesisViolated(_) => CliError::Hypothesis(e),
            other => CliError::Operator(other),
        }
    }
}
