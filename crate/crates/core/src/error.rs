use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpinError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} outside the supported range 2..={1}")]
    InvalidDimension(usize, usize),

    #[error("non-finite component at index {0}")]
    NonFinite(usize),

    #[error("operation undefined on the zero vector")]
    ZeroVector,

    #[error("operator is singular")]
    Singular,

    #[error("not a tripotent: residual {0:.3e}")]
    NotTripotent(f64),

    #[error("expected a minimal tripotent")]
    NotMinimal,

    #[error("expected a maximal tripotent")]
    NotMaximal,

    /// Two routes to the same quantity disagree; signals a tolerance breakdown.
    #[error("structural inconsistency: {0}")]
    Structural(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("subspace is not invariant: residual {0:.3e}")]
    NotInvariant(f64),

    #[error("point outside the open unit ball: operator norm {0}")]
    OutsideBall(f64),

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, SpinError>;
