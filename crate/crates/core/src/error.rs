use thiserror::Error;

/// Largest grid (and permutation) size supported by the bitset-backed
/// diagram types.
pub const MAX_GRID: usize = 11;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("grid size {0} is outside 1..={MAX_GRID}")]
    GridSize(usize),
    #[error("cell ({row},{col}) lies outside the {n}x{n} grid")]
    OutOfGrid { row: usize, col: usize, n: usize },
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("permutation {0} contains a 321 pattern")]
    Not321Avoiding(String),
    #[error("nonzero parts of {0} are not weakly increasing")]
    NotWeaklyIncreasing(String),
    #[error("malformed tableau: {0}")]
    MalformedTableau(String),
    #[error("zero polynomial has no lowest degree part")]
    ZeroPolynomial,
    #[error("state budget of {0} exceeded")]
    BudgetExceeded(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
