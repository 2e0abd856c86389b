use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("basis mismatch: expected {expected}, found {found}")]
    Basis { expected: String, found: String },
    #[error("value out of range: {0}")]
    Range(String),
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("invalid pump specification: {0}")]
    InvalidPump(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("solution diverged at t = {t}: {what}")]
    Divergence { t: f64, what: String },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("oracle preconditions violated: {0}")]
    OracleInvalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
