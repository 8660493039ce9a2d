use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("distance matrix is {rows}x{cols} but {labels} labels were given")]
    ShapeMismatch {
        labels: usize,
        rows: usize,
        cols: usize,
    },
    #[error("asymmetric distance: d({0},{1}) != d({1},{0})")]
    AsymmetricDistance(String, String),
    #[error("negative distance between {0} and {1}")]
    NegativeDistance(String, String),
    #[error("nonzero self-distance at {0}")]
    NonzeroDiagonal(String),
    #[error("distinct points {0} and {1} are at distance zero")]
    ZeroDistanceDistinctPoints(String, String),
    #[error("triangle inequality fails: d({0},{2}) > d({0},{1}) + d({1},{2})")]
    TriangleViolation(String, String, String),
    #[error("base point {0} is not a point of the space")]
    BadBaseIndex(String),
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("space has no points")]
    EmptySpace,
    #[error("operation needs at least {0} points")]
    TooFewPoints(usize),
    #[error("set is empty")]
    EmptySet,
    #[error("unknown point {0}")]
    UnknownPoint(String),
    #[error("operands live on different metric spaces")]
    SpaceMismatch,
    #[error("function does not vanish at the base point")]
    NonzeroAtBase,
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("subset is empty")]
    EmptySubset,
    #[error("subset does not contain the base point")]
    BaseNotInSubset,
    #[error("invalid scalar {0:?}")]
    BadScalar(String),
    #[error("zero vector has no norming function")]
    ZeroVector,
    #[error("oracle is limited to {limit} points, got {got}")]
    TooLarge { limit: usize, got: usize },
    #[error("numerical instability: relative gap {gap:e} exceeds tolerance {tolerance:e}")]
    NumericalInstability { gap: f64, tolerance: f64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
