use thiserror::Error;

/// Failure modes across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("zero lattice vector where a nonzero frequency is required ({context})")]
    ZeroVector { context: &'static str },

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("grid mismatch: {left} vs {right}")]
    GridMismatch { left: usize, right: usize },

    #[error("multiplier is singular at zero frequency but the input has mean {mean_abs:e}")]
    SingularMultiplier { mean_abs: f64 },

    #[error("resource budget exceeded: {what} needs {requested}, budget is {budget}")]
    ResourceBudget {
        what: &'static str,
        requested: u64,
        budget: u64,
    },

    #[error("symbol evaluated at |zeta| = {norm} <= 1/2")]
    ZetaGuard { norm: f64 },

    #[error("positivity failure of {quantity} at grid point ({i}, {j}): value {value:e}")]
    Positivity {
        quantity: &'static str,
        i: usize,
        j: usize,
        value: f64,
    },

    #[error("small divisor |phase| = {phase:e} at xi = {xi:?}, eta = {eta:?} under a weighted filter")]
    SmallDivisor {
        xi: (i64, i64),
        eta: (i64, i64),
        phase: f64,
    },

    #[error("numeric abort at t = {t}: {reason}")]
    NumericAbort { t: f64, reason: String },

    #[error("snapshot cadence {cadence} exceeds the allowed {allowed}")]
    CadenceTooCoarse { cadence: f64, allowed: f64 },

    #[error("field is not real valued: {0}")]
    NotReal(String),

    #[error("field has nonzero mean {0:e}")]
    NonzeroMean(f64),

    #[error("snapshot format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
