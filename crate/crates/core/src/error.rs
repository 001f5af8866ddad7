use thiserror::Error;

/// Errors produced by the geometry, measure and flow kernels.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The field never crosses the requested level (empty or full set).
    #[error("field does not cross the requested level")]
    NoInterface,

    /// The spacing constraint cannot be met inside the named cube.
    #[error("packing infeasible in cube {cube}: {detail}")]
    Packing { cube: usize, detail: String },

    #[error("grid under-resolves a feature: {0}")]
    Resolution(String),

    #[error("time step rejected after {retries} halvings (energy increase {increase:.3e})")]
    StepSize { retries: u32, increase: f64 },

    #[error("infeasible geometry: {0}")]
    InfeasibleGeometry(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("all interface vertices are masked; nothing to audit")]
    EmptyAudit,

    #[error("field grid does not match the configuration grid")]
    GridMismatch,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
