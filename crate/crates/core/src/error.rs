use thiserror::Error;

/// Errors raised by the library. Mathematical *findings* (identity
/// violations, non-isomorphism) are reported through result types, not
/// through this enum.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("scalar backend mismatch: {0}")]
    BackendMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not nilpotent: {0}")]
    NotNilpotent(String),
    #[error("singular map: rank {rank} < {dim}")]
    SingularMap { rank: usize, dim: usize },
    #[error("map does not preserve the grading: basis vector {0} has a mixed-parity image")]
    ParityMixing(usize),
    #[error("field extension required: {0}")]
    NeedsExtension(String),
    #[error("exact backend required for {0}")]
    ExactRequired(&'static str),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
