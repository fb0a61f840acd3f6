use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("duplicate point at index {second} (same as index {first})")]
    DuplicatePoint { first: usize, second: usize },

    #[error("point {point} is not on the variety: {reason}")]
    NotOnVariety { point: usize, reason: String },

    #[error("model is reducible; use qp_upper_search for reducible models")]
    Reducible,

    #[error("model is degenerate (contained in a hyperplane)")]
    Degenerate,

    #[error("unsupported degree {0}; graded pieces are available for degrees 0..=3")]
    UnsupportedDegree(usize),

    #[error("points of gamma span a space of dimension {got}, expected {expected}")]
    GammaNotGeneral { expected: usize, got: usize },

    #[error("{what} exceeds the limit of {limit}")]
    TooLarge { what: String, limit: usize },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("{theorem} contradicted: {detail}")]
    Inconsistent { theorem: String, detail: String },
}
