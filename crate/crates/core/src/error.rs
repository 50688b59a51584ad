use thiserror::Error;

/// Errors raised by the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("shape mismatch: expected {expected} samples, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("non-finite sample {value} at grid index ({i}, {j})")]
    NonFinite { i: usize, j: usize, value: f64 },

    #[error("spectrum is not conjugate symmetric (relative deviation {deviation:e})")]
    NotConjugateSymmetric { deviation: f64 },

    #[error("zero-mean precondition violated: mean {mean:e} exceeds tolerance {tolerance:e}")]
    NonZeroMean { mean: f64, tolerance: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("time step {dt:e} violates the CFL bound {max_dt:e}")]
    CflViolation { dt: f64, max_dt: f64 },

    #[error("non-finite state detected at t = {t}")]
    NumericalBlowup { t: f64 },

    #[error("time {t} outside recorded range [{start}, {end}]")]
    TimeOutOfRange { t: f64, start: f64, end: f64 },

    #[error("grid mismatch between operands")]
    GridMismatch,

    #[error("degenerate polygon (area {area:e})")]
    DegeneratePolygon { area: f64 },

    #[error("support diameter {diameter} exceeds the allowed {limit}")]
    SupportTooLarge { diameter: f64, limit: f64 },

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
