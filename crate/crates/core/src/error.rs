use thiserror::Error;

/// Errors raised by the library. Check failures that are data (validation
/// reports, goodness reports) are never reported through this type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon is not strictly convex at vertex {0}")]
    NotStrictlyConvex(usize),
    #[error("polygon is not convex: {0}")]
    NotConvex(String),
    #[error("empty side range ({u}, {v})")]
    EmptyRange { u: usize, v: usize },
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("graph with {n} vertices exceeds the brute-force limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("graph sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("random polygon generation failed after {0} attempts")]
    GenerationFailed(usize),
    #[error("expected a polygon with {expected} sides, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("chords {0:?} and {1:?} cross")]
    NotOuterplanar((usize, usize), (usize, usize)),
    #[error("invalid chord {0:?}: {1}")]
    InvalidChord((usize, usize), String),
    #[error("graph is not side-disk realizable: {0}")]
    NotRealizable(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
