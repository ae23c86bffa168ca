use thiserror::Error;

/// Errors raised by the evaluators, series machinery and oracles.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("zero raised to negative power {exponent} in {context}")]
    ZeroToNegativePower { exponent: i64, context: String },

    #[error("cannot parse rational from {0:?}")]
    Parse(String),

    #[error("{0}")]
    UnknownName(String),

    #[error("series constant term is not invertible: {0}")]
    NotInvertible(String),

    #[error("floating-point overflow evaluating {0}")]
    Overflow(String),

    #[error("insufficient samples: got {got}, need at least {min}")]
    InsufficientSamples { got: u64, min: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
