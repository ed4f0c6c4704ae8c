use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: {left} points vs {right} points")]
    SizeMismatch { left: usize, right: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what}: n = {n} exceeds the configured limit {limit} (use a larger limit to override)")]
    Guard { what: &'static str, n: usize, limit: usize },

    #[error("tree is not decreasing: {0}")]
    NotDecreasing(String),

    #[error("tree is not respectful: {0}")]
    NotRespectful(String),

    #[error("not a cross-section: {0}")]
    NotCrossSection(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
