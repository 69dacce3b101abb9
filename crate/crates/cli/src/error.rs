use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] wpusn_core::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use wpusn_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(E::InsufficientBudget { .. }) => 3,
            CliError::Core(E::NotImplemented(_)) => 4,
            CliError::Core(_) => 2,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        use wpusn_core::Error as E;
        match self {
            CliError::Config(_) => "config",
            CliError::Core(E::InsufficientBudget { .. }) => "insufficient_budget",
            CliError::Core(E::NotImplemented(_)) => "not_implemented",
            CliError::Core(E::SchemeConstraint(_)) => "scheme_constraint",
            CliError::Core(E::OutOfRange { .. }) => "out_of_range",
            CliError::Core(_) => "invalid_parameter",
            CliError::Io(_) => "io",
            CliError::Csv(_) => "csv",
            CliError::Json(_) => "json",
        }
    }

    pub fn record(&self) -> ErrorRecord {
        ErrorRecord {
            error: self.kind(),
            message: self.to_string(),
            exit_code: self.exit_code(),
        }
    }
}

/// Machine-readable failure written as `error.json`.
#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub error: &'static str,
    pub message: String,
    pub exit_code: i32,
}

pub type CliResult<T> = Result<T, CliError>;
