//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero vector cannot be normalized")]
    ZeroNorm,

    #[error("state norm {norm} deviates from 1 by more than {tol}")]
    NotNormalized { norm: f64, tol: f64 },

    #[error("basis dimension overflows u64 for M={modes}, N={photons}")]
    DimensionOverflow { modes: usize, photons: usize },

    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: u64, dim: u64 },

    #[error("photon/mode mismatch: expected (M={expected_modes}, N={expected_photons}), got (M={modes}, N={photons})")]
    ShapeMismatch {
        expected_modes: usize,
        expected_photons: usize,
        modes: usize,
        photons: usize,
    },

    #[error("matrix dimension {dim} exceeds permanent cap {cap}")]
    PermanentCap { dim: usize, cap: usize },

    #[error("matrix is not unitary: Frobenius defect {defect:e} exceeds {tol:e}")]
    NotUnitary { defect: f64, tol: f64 },

    #[error("invalid partition: {reason}")]
    InvalidPartition { reason: String },

    #[error("mode count {modes} exceeds bipartition-enumeration cap {cap}")]
    GmeCap { modes: usize, cap: usize },

    #[error("root finder failed to converge after {iterations} iterations (bracket [{lo}, {hi}], residual {residual:e})")]
    RootNotConverged {
        iterations: usize,
        lo: f64,
        hi: f64,
        residual: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("serialization: {0}")]
    Serialization(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
