use thiserror::Error;

/// Errors raised by the library. Variants map one-to-one onto the failure
/// modes of the public operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("divisor interval {0} contains zero")]
    DivisorContainsZero(String),
    #[error("radicands {0} and {1} cannot be mixed")]
    MixedRadicand(u64, u64),
    #[error("radicand {0} is not a square-free integer greater than one")]
    InvalidRadicand(u64),
    #[error("invalid interval: lower endpoint {lo} exceeds upper endpoint {hi}")]
    InvalidInterval { lo: String, hi: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("matrix is {rows}x{cols}, square matrix required")]
    NotSquare { rows: usize, cols: usize },
    #[error("index {index} out of range for dimension {bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("rank precondition violated: {0}")]
    RankPreconditionViolated(String),
    #[error("no rational point found inside the box within the precision budget")]
    BoxTooTight,
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("no witness: {0}")]
    NoWitness(String),
    #[error("witness invalid: {0}")]
    WitnessInvalid(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("unsupported rank {rank} for {cols} columns: {reason}")]
    UnsupportedRank {
        rank: usize,
        cols: usize,
        reason: String,
    },
    #[error("unsatisfiable instance spec: {0}")]
    UnsatisfiableSpec(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
