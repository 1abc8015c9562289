use thiserror::Error;

/// Errors raised by the algebraic constructions and the job front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid Lie algebra data: {0}")]
    InvalidAlgebra(String),
    #[error("not a good grading: {0}")]
    NotAGoodGrading(String),
    #[error("invalid sl2-triple: {0}")]
    InvalidTriple(String),
    #[error("element is not homogeneous for the ad x grading: {0}")]
    Grading(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degree bound too small: {0}")]
    BoundTooSmall(String),
    #[error("truncation window too small: {0}")]
    Truncation(String),
    #[error("element is not in the center of h: {0}")]
    InvalidCenter(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
