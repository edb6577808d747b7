use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degree {degree} exceeds the factoring cap {cap}")]
    UnsupportedDegree { degree: usize, cap: usize },
    #[error("search size exceeds configured caps: {0}")]
    UnsupportedSize(String),
    #[error("not a valid zeta type: {0}")]
    InvalidType(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
