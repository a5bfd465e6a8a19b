use thiserror::Error;

/// Errors raised by the solver and its analysis toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("shape mismatch: expected {expected} samples, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("field is not divergence-free (modal divergence {residual:e})")]
    NotDivergenceFree { residual: f64 },

    #[error("CFL violation: dt = {dt:e} exceeds limit {limit:e} (max speed {max_speed:e})")]
    Cfl { dt: f64, limit: f64, max_speed: f64 },

    #[error("non-finite value detected at t = {t}")]
    NonFinite { t: f64 },

    #[error("decay fit undefined: {0}")]
    DecayFit(String),

    #[error("snapshot: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
