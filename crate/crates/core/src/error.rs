use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("detuning must be negative (red-detuned regime), got {0} rad/s")]
    NotRedDetuned(f64),

    #[error("unstable regime: stability margin {margin} ≤ 0")]
    Unstable { margin: f64 },

    #[error("quadratic form is not positive definite (unstable regime)")]
    NotPositiveDefinite,

    #[error("state is unphysical: occupation {0} is negative")]
    Unphysical(f64),

    #[error("endpoints differ in more than the detuning: {0}")]
    MismatchedEndpoints(&'static str),

    #[error("detunings must satisfy delta_i < delta_f < 0 (got {delta_i}, {delta_f})")]
    DetuningOrder { delta_i: f64, delta_f: f64 },

    #[error("the small-coupling work formula assumes an empty photon bath, got n_a = {0}")]
    NonzeroPhotonOccupation(f64),

    #[error("no interior work maximum: radicand {0} ≤ 0")]
    NoInteriorMaximum(f64),

    #[error("`{0}` is required for this operation")]
    MissingParameter(&'static str),

    #[error("ramp shape is not monotone")]
    NonMonotoneShape,

    #[error("scenario line {line}: {reason}")]
    Scenario { line: usize, reason: String },

    #[error("malformed sweep table: {0}")]
    Table(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}
