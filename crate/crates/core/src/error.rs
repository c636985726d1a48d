use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Input fails a precondition (non-finite, wrong sign, bad grid, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input is finite and well-formed but outside the model's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Root bracket scan exhausted its budget without a sign change.
    #[error("no sign change in scanned interval [{lo}, {hi}]")]
    BracketExhausted { lo: f64, hi: f64 },

    /// Iterative solver failed to reach its tolerance.
    #[error("no convergence: {0}")]
    Convergence(String),

    /// Waveform feature extraction failed (e.g. too few zero crossings).
    #[error("extraction failed: {0}")]
    Extraction(String),

    /// Finite-element system could not be assembled or factorized.
    #[error("assembly failed: {0}")]
    Assembly(String),

    /// Time integration produced NaN or underflowed its step size.
    #[error("integration diverged at t = {t}: {details}")]
    Divergence { t: f64, details: String },

    /// Static load beyond the constitutive limit (no admissible root).
    #[error("load limit exceeded: {0}")]
    LoadLimit(String),

    /// Inextensional kinematics require |v'| < 1.
    #[error("inextensional slope limit exceeded: {0}")]
    SlopeLimit(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

/// Rejects non-finite values early so solvers never see NaN.
pub(crate) fn ensure_finite(value: f64, name: &str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::invalid(format!("{name} must be finite, got {value}")))
    }
}
