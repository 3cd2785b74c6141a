use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Structural problems (wrong dimensions, bad indices) are kept apart from
/// physical ones (a covariance matrix violating the uncertainty principle, a
/// channel that is not completely positive) so callers can report them
/// differently.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid mode table: {0}")]
    InvalidModes(String),

    #[error("mode index {index} out of range for {modes} modes")]
    ModeOutOfRange { index: usize, modes: usize },

    #[error("matrix is not symmetric (residual {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive definite (min eigenvalue {0:e})")]
    NotPositiveDefinite(f64),

    #[error("matrix is not symplectic (residual {0:e})")]
    NotSymplectic(f64),

    #[error("matrix is not unitary (residual {0:e})")]
    NotUnitary(f64),

    #[error("transformation couples modes of different frequency (largest entry {0:e})")]
    FrequencyMixing(f64),

    #[error("{what} residual {residual:e} exceeds tolerance {tol:e}")]
    Tolerance {
        what: &'static str,
        residual: f64,
        tol: f64,
    },

    #[error("unphysical state: {0}")]
    Unphysical(String),

    #[error("channel is not completely positive (min eigenvalue {0:e})")]
    NotCompletelyPositive(f64),

    #[error("noise weights too small for complete positivity; minimal weights {minimal:?}")]
    NoiseTooSmall { minimal: Vec<f64> },

    #[error("state is mixed (largest symplectic eigenvalue {0}); no closed form available")]
    MixedState(f64),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
