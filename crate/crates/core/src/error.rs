use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter out of range: {0}")]
    Domain(String),

    #[error("matrix rows are not orthonormal (largest Gram deviation {max_deviation:.3e})")]
    NotOrthogonal { max_deviation: f64 },

    #[error("Schmidt coefficients are not normalized (sum of squares {sum_sq})")]
    NotNormalized { sum_sq: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unknown outcome label `{label}` for party {party}")]
    LabelMismatch { party: usize, label: String },

    #[error("outcome space has {entries} entries, above the cap of {cap}")]
    ResourceLimit { entries: u128, cap: u128 },

    #[error("distributions are defined on different outcome sets")]
    OutcomeSetMismatch,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("exact data required: {0}")]
    InexactData(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("certificate failed verification: {0}")]
    CertificateRejected(String),

    #[error("parse error: {0}")]
    Parse(String),
}
