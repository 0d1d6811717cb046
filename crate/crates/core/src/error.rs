//! Crate-wide error type.

/// Errors produced by complex construction, coloring I/O, and analysis routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unsupported complex parameters: {0}")]
    UnsupportedComplex(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("vertex {0} is not in the complex")]
    VertexNotFound(u32),

    #[error("point is outside the simplex")]
    PointOutsideSimplex,

    #[error("operation requires a closed complex (torus or sphere family)")]
    RequiresClosedComplex,

    #[error("operation requires the torus family")]
    RequiresTorus,

    #[error("computation budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("malformed file: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
