use thiserror::Error;

/// Errors produced by the linear algebra, consensus and Lyapunov routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("scalar mode mismatch: cannot combine exact and approximate values")]
    ModeMismatch,
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric: entry ({row}, {col}) differs from its transpose")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix is not stochastic")]
    NotStochastic,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("n = {n} is too large for the explicit permutation sum (limit {limit}); use the closed form")]
    TooLarge { n: usize, limit: usize },
    #[error("the counterexample graph requires n >= 8, got n = {0}")]
    CounterexampleSize(usize),
    #[error("left fixed space has dimension {0}; the matrix is reducible")]
    Reducible(usize),
    #[error("left fixed space contains no strictly positive vector")]
    NoPositiveVector,
    #[error("invalid weight vector: {0}")]
    InvalidPi(String),
    #[error("weight vector is not a left fixed vector of the matrix")]
    NotLeftFixed,
    #[error("finite sequence has {len} graphs but {needed} steps were requested")]
    SequenceTooShort { len: usize, needed: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dims(rows: usize, cols: usize) -> String {
    format!("{rows}x{cols}")
}
