use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A tolerance or grid setting is unusable.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A probability vector or state does not sum to one.
    #[error("normalization error: total {total} deviates from 1 by more than {tolerance}")]
    Normalization { total: f64, tolerance: f64 },

    /// The ancilla amplitude is zero, so the coefficient ratio is undefined.
    #[error("degenerate ancilla: beta must be nonzero")]
    DegenerateAncilla,

    /// A projective measurement outcome has zero probability.
    #[error("impossible outcome {outcome}: projected norm is zero")]
    ImpossibleOutcome { outcome: u64 },

    #[error("cannot write {path}: {message}")]
    Io { path: String, message: String },

    #[error("empty input: {0}")]
    Empty(&'static str),
}
