use thiserror::Error;

/// Contract violations on the model structures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("need at least 2 elements, got {0}")]
    TooSmall(usize),
    #[error("element {element} out of range for n = {n}")]
    ElementOutOfRange { element: u32, n: usize },
    #[error("position {pos} out of range for n = {n}")]
    PositionOutOfRange { pos: usize, n: usize },
    #[error("rank {rank} out of range for n = {n}")]
    RankOutOfRange { rank: usize, n: usize },
    #[error("element {0} compared with itself")]
    SelfComparison(u32),
    #[error("sequence is not a permutation of 0..n")]
    NotAPermutation,
    #[error("working list has {working} elements but the true order has {truth}")]
    LengthMismatch { working: usize, truth: usize },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("comparison result fed to a sorter with no outstanding query")]
    NoOutstandingQuery,
    #[error("{0}")]
    Metrics(#[from] MetricsError),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("brute-force oracle limited to n <= {limit}, got {n}")]
    TooLargeForBruteForce { n: usize, limit: usize },
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("window fraction must lie in (0, 1), got {0}")]
    BadWindowFraction(String),
    #[error("good/bad ratio undefined: no harmful swaps recorded")]
    NoBadSwaps,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
