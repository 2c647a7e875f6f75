use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable sets differ: {0} vs {1}")]
    VariableMismatch(String, String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("series has no invertible leading monomial")]
    NotInvertible,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("inconsistent system: first mismatch at {0}")]
    Inconsistent(String),

    #[error("identity failed: {0}")]
    IdentityFailure(String),

    #[error("exponent below declared floor: {0}")]
    BelowFloor(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
