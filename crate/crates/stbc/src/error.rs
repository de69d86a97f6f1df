use thiserror::Error;

/// Errors surfaced by construction, decoding, and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("sigma index must be 1, 2 or 3 (got {0})")]
    InvalidSigmaIndex(usize),

    #[error("antenna exponent a must be >= {min} (got {got})")]
    InvalidExponent { min: usize, got: usize },

    #[error("chain indices must be strictly increasing and within 1..={max} (got {got:?})")]
    InvalidChain { max: usize, got: Vec<usize> },

    #[error("delta exponent argument m={m} out of range for set {set} at a={a}")]
    DeltaOutOfRange { set: char, a: usize, m: usize },

    #[error("expected a vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{0} is not a supported square QAM size (expected 4, 16 or 64)")]
    InvalidQamSize(usize),

    #[error("bit count {got} does not match {expected} for this code/constellation")]
    BitCountMismatch { expected: usize, got: usize },

    #[error("real equivalent model needs Nr*T >= K ({nr_t} < {k})")]
    DimensionShortfall { nr_t: usize, k: usize },

    #[error("matrix is not upper triangular with positive diagonal")]
    NotUpperTriangular,

    #[error("search space of {size} candidates exceeds the guard of {guard}")]
    SearchSpaceExceeded { size: u128, guard: u128 },

    #[error("node budget {budget} is below the minimum of {min} (one full descent)")]
    BudgetTooSmall { budget: u64, min: u64 },

    #[error("snr grid must be strictly increasing")]
    BadSnrGrid,

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}
