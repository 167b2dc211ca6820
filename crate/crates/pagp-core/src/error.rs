//! Crate-wide error type.

use alloc::string::String;
use alloc::vec::Vec;

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Malformed caller input: dimension mismatches, empty sets, bad counts.
    #[error("input error: {0}")]
    Input(String),

    /// Values outside the mathematical domain (non-finite or non-positive
    /// scale hyperparameters, negative noise variance).
    #[error("domain error: {0}")]
    Domain(String),

    /// A requested operation is not defined for this kernel family or
    /// input dimension.
    #[error("capability error: {0}")]
    Capability(String),

    /// Gram factorization failed even after escalating jitter.
    #[error("conditioning error: {message} (jitter ladder tried: {jitter_ladder:?})")]
    Conditioning {
        message: String,
        jitter_ladder: Vec<f64>,
    },

    /// Time marching produced values beyond the blow-up guard.
    #[error("marching instability at layer {layer}: max |u| = {max_abs:.3e}")]
    Instability { layer: usize, max_abs: f64 },

    /// All optimizer restarts failed.
    #[error("training error: {0}")]
    Training(String),

    /// The optimizer could not make progress (persistent non-finite values).
    #[error("optimization error: {0}")]
    Optimization(String),

    /// Metric preconditions violated (zero-norm reference, length mismatch).
    #[error("metric error: {0}")]
    Metric(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
