use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("singular matrix")]
    SingularMatrix,

    #[error("invalid algebra data: {0}")]
    InvalidAlgebra(String),

    #[error("invalid block decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
