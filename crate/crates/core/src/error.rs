use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "integration truncated after {steps} steps (reached {progress:.3e} of {target:.3e} m)"
    )]
    Truncated {
        steps: usize,
        progress: f64,
        target: f64,
    },

    #[error("trajectory was absorbed by the star; deflection is undefined")]
    Absorbed,

    #[error("Kepler equation did not converge after {iterations} iterations (M = {mean_anomaly}, e = {eccentricity})")]
    KeplerNonConvergence {
        iterations: usize,
        mean_anomaly: f64,
        eccentricity: f64,
    },

    #[error("root bracketing failed: {0}")]
    Bracket(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
