use thiserror::Error;

/// Errors raised by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("malformed input at line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("unsupported format: {0}")]
    Unsupported(String),

    #[error("capacity exceeded: {what} is {requested}, limit is {limit}")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("non-positive curvature {value:e} at iteration {iteration}")]
    NonpositiveCurvature { iteration: usize, value: f64 },

    #[error("internal failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable tag, used when errors are serialized into reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } | Error::Structural(_) => "structural",
            Error::Domain(_) => "domain",
            Error::Malformed { .. } => "malformed-input",
            Error::Unsupported(_) => "unsupported-format",
            Error::Capacity { .. } => "capacity",
            Error::NonpositiveCurvature { .. } => "nonpositive-curvature",
            Error::Internal(_) => "internal-failure",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(v: &[f64], what: &str) -> Result<()> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(i) => Err(Error::Domain(format!(
            "{what} has a non-finite entry {} at index {i}",
            v[i]
        ))),
        None => Ok(()),
    }
}
