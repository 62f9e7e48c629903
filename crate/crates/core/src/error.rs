use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-positive geometric value {value} at index {index}")]
    NonPositive { index: usize, value: f64 },

    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    /// The representative of a geometric number left the normal `f64` range.
    /// The log-view of the result is still carried so callers can continue in
    /// the log domain.
    #[error("geometric representative out of range (log-view {log_view})")]
    Range { log_view: f64 },

    #[error("Orlicz function evaluated at negative argument {0}")]
    NegativeArgument(f64),

    #[error("invalid Orlicz function: {0}")]
    InvalidOrlicz(String),

    #[error("degenerate Orlicz function: M({u}) = 0 for u > 0")]
    DegenerateOrlicz { u: f64 },

    #[error("Orlicz function fails the delta-2 condition (estimated K = {k})")]
    Delta2Fails { k: f64 },

    #[error("invalid lambda sequence: {0}")]
    InvalidLambda(String),

    #[error("invalid exponent sequence: {0}")]
    InvalidExponent(String),

    #[error("invalid space specification: {0}")]
    InvalidSpec(String),

    #[error("window index {n} outside 1..={max}")]
    WindowOutOfRange { n: usize, max: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },

    #[error("unknown report format {0:?}")]
    UnknownFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
