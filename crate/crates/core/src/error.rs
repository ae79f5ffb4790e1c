use thiserror::Error;

/// Errors raised by the decision engine and its numeric companions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot parse rational {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("interval endpoints out of order: {lo} > {hi}")]
    BadInterval { lo: String, hi: String },
    #[error("repeated point {0} in divided difference")]
    RepeatedPoint(String),
    #[error("need at least {needed} nodes, found {found}")]
    TooFewNodes { needed: usize, found: usize },
    #[error("moment {index} is {value}, expected 0")]
    MomentViolation { index: usize, value: String },
    #[error("order mismatch: expected {expected}, found {found}")]
    OrderMismatch { expected: usize, found: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("unsupported order k = {0}")]
    UnsupportedOrder(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
