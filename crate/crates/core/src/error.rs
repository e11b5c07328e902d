use thiserror::Error;

/// Errors produced by fan construction, cohomology and certificate code.
///
/// Indices inside messages are 1-based, matching the external JSON formats.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed fan: {0}")]
    MalformedFan(String),

    #[error("index {index} out of range (expected 1..={len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("invalid Bott tower description: {0}")]
    Spec(String),

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("J-vector shape error: {0}")]
    JShape(String),

    #[error(
        "torsion in {degree} quotient (invariant factors {factors:?}); smooth complete toric \
         varieties have torsion-free cohomology, so the fan is singular or malformed"
    )]
    Torsion { degree: &'static str, factors: Vec<String> },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid isolation witness: {0}")]
    InvalidWitness(String),

    #[error("trace does not belong to this fan (trace base {trace}, witness fan {witness})")]
    TraceMismatch { trace: String, witness: String },

    #[error("search bound must be at least 1, got {0}")]
    Bound(i64),

    #[error("search box of {points} points exceeds the limit of {limit}")]
    SearchTooLarge { points: u128, limit: u128 },

    #[error("a torus bundle needs an even, positive number of classes, got {0}")]
    OddRank(usize),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
