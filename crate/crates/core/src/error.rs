use thiserror::Error;

/// Errors produced anywhere in the simulator, transpiler or benchmark harness.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value is out of range or missing.
    #[error("configuration error: {0}")]
    Config(String),

    /// An API was called with arguments that violate its contract
    /// (bad qubit indices, wrong matrix size, non-unitary gate in ideal mode...).
    #[error("usage error: {0}")]
    Usage(String),

    /// An operator or channel would increase the trace of the state.
    #[error("unphysical operation: {0}")]
    Unphysical(String),

    /// The state has (numerically) zero trace and cannot be renormalized.
    #[error("degenerate state: trace {0:e} is too small to renormalize")]
    DegenerateState(f64),

    /// A gate sequence cannot be laid out on the requested device modality.
    #[error("scheduling error: {0}")]
    Scheduling(String),

    /// Two-qubit synthesis failed numerically.
    #[error("synthesis error: {0}")]
    Synthesis(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
