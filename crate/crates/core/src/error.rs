use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("`{field}` = {value} is outside the calibrated range [{min}, {max}]")]
    OutOfRange {
        field: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    /// The power budget does not cover the fixed consumption.
    #[error(
        "insufficient power budget: transmit power would be {available} W (deficit {deficit} W)"
    )]
    InsufficientBudget { available: f64, deficit: f64 },

    #[error("scheme constraint violated: {0}")]
    SchemeConstraint(String),

    #[error("{0} is not implemented by this simulator")]
    NotImplemented(&'static str),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("covariance matrix is not Hermitian positive semidefinite: {0}")]
    Covariance(String),

    #[error("empty input: {0}")]
    Empty(&'static str),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
