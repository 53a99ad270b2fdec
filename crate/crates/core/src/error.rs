use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("subspace is not invariant under the operator (basis vector {0})")]
    NotInvariant(usize),
    #[error("semisimple part does not split over the rationals: {0}")]
    NotSplit(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("result too large: {0}")]
    TooLarge(String),
    #[error("polynomial is not multilinear in the layer: {0}")]
    NotMultilinearInLayer(String),
    #[error("size bound exceeded: {0}")]
    Overflow(String),
    #[error("polynomial has a constant term and the algebra has no unit")]
    UnitRequired,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("vector list is not pointed: no linear functional is positive on all vectors")]
    NotPointed,
    #[error("vectors do not span the ambient space (rank {rank} < {p})")]
    NotSpanning { rank: usize, p: usize },
    #[error("degenerate cone: {0}")]
    DegenerateCone(String),
    #[error("validation failed: {0}")]
    ValidationFailed(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("table is not associative at basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
