//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by field construction, series arithmetic and the
/// recursion engine.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid field specification: {0}")]
    BadFieldSpec(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("the declared minimal polynomial is reducible; discovered factor: {0}")]
    ReducibleGenerator(String),

    #[error("scalar context mismatch: {0}")]
    CtxMismatch(String),

    #[error("variable mismatch: expected `{expected}`, got `{got}`")]
    VariableMismatch { expected: String, got: String },

    #[error("series precision exhausted: {0} (retry with window >= {needed})", needed = .1)]
    Precision(String, i64),

    #[error("ill-defined series operation: {0}")]
    BadSeriesOp(String),

    #[error("curve validation failed: {0}")]
    BadCurve(String),

    #[error("square root does not exist in the coefficient field: {0}")]
    NoSqrt(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("projection defect: family is not in the dzeta span ({0})")]
    ProjectionDefect(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("cache error: {0}")]
    Cache(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
