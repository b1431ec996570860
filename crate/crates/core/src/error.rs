use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable count mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("invalid arc data: {0}")]
    InvalidArc(String),
    #[error("assumption violated: {0}")]
    Assumption(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("arc lies in the triangulation: {0}")]
    ArcInTriangulation(usize),
    #[error("check failed: {0}")]
    Check(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
