use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The two barrier lines do not cross on (0, inf); the problem is one-dimensional.
    #[error("barrier lines do not intersect on (0, inf): {0}; use the one-dimensional operations")]
    NonIntersectingBarriers(String),

    #[error("model violates c1 > c2, q2 > q1: {0}")]
    InvalidRegime(String),

    #[error("operation not defined in this regime: {0}")]
    WrongRegime(String),

    #[error("grid of {points} points exceeds the limit of {limit}; use a coarser step")]
    StepTooSmall { points: u64, limit: u64 },

    #[error("matrix of order {order} is not positive definite (pivot {pivot} failed, max jitter {jitter:e})")]
    NotPositiveDefinite { order: usize, pivot: usize, jitter: f64 },

    #[error("missing constant {descriptor}; simulate it first (e.g. with --simulate-constants)")]
    MissingConstant { descriptor: String },

    #[error("argument outside the domain: {0}")]
    DomainError(String),

    #[error("constant store {path}: {reason}")]
    StoreCorrupt { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
