use crate::trace::RunTrace;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("vector component {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },

    #[error("vector must have at least one component")]
    EmptyVector,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("evaluation produced a non-finite {what} at x = {at:?}")]
    Evaluation { what: &'static str, at: Vec<f64> },

    #[error("f(x) = {value} lies below the declared infimum {f_star}")]
    InconsistentInfimum { value: f64, f_star: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("hard instance construction failed: {0}")]
    Construction(String),

    #[error("momentum rule produced a zero (or invalid) cone element at t = {t}")]
    DegenerateMomentum { t: usize },

    #[error("backtracking exceeded {cap} trials at t = {t} (stepsize below beta^{cap})")]
    Stagnation { t: usize, cap: u32 },

    #[error("iterate diverged at t = {t}")]
    Diverged { t: usize, trace: Box<RunTrace> },

    #[error("invalid configuration: {field}: {message}")]
    Config { field: String, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
