use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("factorial table capacity exceeded: requested {requested}, capacity {capacity}")]
    Capacity { requested: usize, capacity: usize },

    #[error("series did not converge: {context}")]
    NonConvergence { context: String },

    #[error("invalid spec field `{field}`: {reason}")]
    InvalidSpec { field: String, reason: String },

    #[error("contour too close to a pole: {context}")]
    Contour { context: String },

    #[error("matrix dimension {dim} exceeds configured cap {cap}")]
    SizeCap { dim: usize, cap: usize },

    #[error("fixed-point iteration failed to converge: residual {residual:.3e} after {iterations} iterations")]
    FixedPoint { residual: f64, iterations: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
