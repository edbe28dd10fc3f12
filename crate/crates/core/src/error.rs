use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polynomial degree {0} exceeds 2")]
    DegreeTooHigh(usize),
    #[error("empty interval [{lo}, {hi}]")]
    EmptyInterval { lo: String, hi: String },
    #[error("duplicate x-coordinate {0}")]
    DuplicateX(String),
    #[error("x-coordinates not strictly increasing at index {0}")]
    Unsorted(usize),
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {index} out of range (n = {n})")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("argument {t} outside [{lo}, {hi}]")]
    OutOfRange { t: String, lo: String, hi: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no tangent parabola in the requested window")]
    NoTangency,
    #[error("recursion produced a negative coefficient c_{index} = {value}")]
    NegativeCoefficient { index: usize, value: String },
    #[error("no subset of the requested size exists")]
    NotFound,
    #[error("evidence failed verification: {0}")]
    Unverified(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precision limit of {0} bits reached before the bracket separated")]
    PrecisionExhausted(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
