use thiserror::Error;

/// Errors produced by the relaxation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cut set must not be empty")]
    EmptyCutSet,

    #[error("solver backend `{0}` does not support second-order cone rows")]
    ConeUnsupported(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("top eigenvector is degenerate; no sparse component can be extracted")]
    DegenerateComponent,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("generator failed: {0}")]
    Generator(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
