use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A physical or model parameter violates its constraint.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("size error: {0}")]
    Size(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// Index beyond the range where double-double evaluation is trusted.
    #[error("index {index} outside supported range 0..={max}")]
    OutOfRange { index: usize, max: usize },
    /// Estimated error of an evaluation exceeds the accepted threshold.
    #[error("accuracy error: {0}")]
    Accuracy(String),
    #[error("singularity at {0}")]
    Singularity(f64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("scenario error: {0}")]
    Scenario(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
