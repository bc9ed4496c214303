use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("wrong basis: {0}")]
    Basis(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },
    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("constraint violation: {0}")]
    Constraint(String),
    #[error("blow-up at step {step} (t = {t})")]
    BlowUp { step: usize, t: f64 },
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("divergent integral: {0}")]
    Divergence(String),
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn param(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name: name.to_string(), reason: reason.into() }
    }

    /// True for failures of a numerical procedure, as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::Constraint(_)
                | Error::BlowUp { .. }
                | Error::Divergence(_)
                | Error::Resolution(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
