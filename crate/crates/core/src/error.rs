use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// `J_x^2 = -id` fails beyond tolerance at some evaluation point.
    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("generator magnitude too large: {0}")]
    Invertibility(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid homogeneous pair: {0}")]
    InvalidPair(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("complement has odd real dimension {0}; no complex structure exists on it")]
    OddDimension(usize),

    #[error("candidate subalgebra is not admissible: {0}")]
    InvalidK0(String),

    #[error("invalid flag: {0}")]
    InvalidFlag(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
