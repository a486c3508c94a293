use thiserror::Error;

use crate::cube::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range 1..={max} for {what}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },

    #[error("vertex bits {bits:#b} do not fit in dimension {dim}")]
    VertexOutOfRange { dim: usize, bits: u64 },

    #[error("dimension {0} exceeds the supported maximum")]
    DimensionTooLarge(usize),

    #[error("table is not cotransverse: {0}")]
    NotCotransverse(Violation),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("budget exceeded: {needed} table cells requested, budget is {budget}")]
    Budget { needed: u128, budget: u128 },

    #[error("factorization failed: {0}")]
    Factorization(String),

    #[error("vertex {alpha} is not strictly below {beta}")]
    NotStrictlyBelow { alpha: String, beta: String },

    #[error("point coordinate {0} is outside [0,1]")]
    CoordinateOutOfRange(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("paths are not composable: {0}")]
    EndpointMismatch(String),

    #[error("unknown cube {id} in dimension {dim}")]
    UnknownCube { dim: usize, id: usize },

    #[error("invalid precubical set: {0}")]
    Precubical(String),

    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),

    #[error("attaching map is not well defined: {0}")]
    Attach(String),

    #[error("unknown check suite `{0}`")]
    UnknownSuite(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
