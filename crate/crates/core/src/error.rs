use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what}: size {actual} exceeds cap {limit}")]
    SizeCap {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Carries an odd closed walk (first vertex repeated implicitly) proving non-bipartiteness.
    #[error("graph is not bipartite (odd cycle through {} vertices)", witness.len())]
    NotBipartite { witness: Vec<usize> },

    #[error("vertex set mixes both parity classes")]
    MixedParity,

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("malformed interval [{lo}, {hi}] for a sequence of length {len}")]
    MalformedInterval { lo: usize, hi: usize, len: usize },

    #[error("sequence has independence number {alpha}, below the half order n = {n}")]
    Unbalanced { alpha: usize, n: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cache integrity check failed for {0}")]
    CacheIntegrity(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
