use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("cannot bisect a degenerate box (all widths are zero)")]
    DegenerateBox,

    #[error("invalid cone: {0}")]
    InvalidCone(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("point lies outside the problem domain")]
    OutOfDomain,

    #[error("empty point set")]
    EmptySet,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
}

pub type Result<T> = std::result::Result<T, Error>;
