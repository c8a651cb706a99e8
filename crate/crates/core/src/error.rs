use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("dimension {0} is too small (need at least 2)")]
    DimensionTooSmall(usize),

    #[error("vector is not unit norm (norm = {0})")]
    NotUnitNorm(f64),

    #[error("cannot normalize a zero or non-finite vector")]
    Degenerate,

    #[error("point lies outside cell {cell} (|t| = {ratio})")]
    OutsideCell { cell: usize, ratio: f64 },

    #[error("cell index {index} out of range 1..={cells}")]
    CellOutOfRange { index: usize, cells: usize },

    #[error("cube coordinate {0} is outside the open interval (0, 1)")]
    CoordinateOutOfRange(f64),

    #[error("probability {0} is outside the open interval (0, 1)")]
    ProbabilityOutOfRange(f64),

    #[error("invalid bit allocation: {0}")]
    InvalidAllocation(String),

    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),

    #[error("malformed codeword: {0}")]
    MalformedCodeword(String),

    #[error("empty codebook")]
    EmptyCodebook,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
