use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Malformed input: non-finite values, dimension mismatch, bad ranges.
    #[error("invalid input: {0}")]
    Input(String),

    /// A formula was evaluated outside the region where it is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method did not reach its tolerance.
    #[error("numerical failure: {message}")]
    Numerical {
        message: String,
        iterates: Vec<Complex64>,
        residuals: Vec<f64>,
    },

    /// Wraps a failure that happened at one point of a parameter scan.
    #[error("at t = {t}: {source}")]
    AtParameter { t: f64, source: Box<Error> },
}

impl Error {
    pub(crate) fn numerical(message: impl Into<String>) -> Self {
        Error::Numerical {
            message: message.into(),
            iterates: Vec::new(),
            residuals: Vec::new(),
        }
    }

    pub(crate) fn at(t: f64, source: Error) -> Self {
        Error::AtParameter {
            t,
            source: Box::new(source),
        }
    }

    /// True when the root cause is a numerical failure (as opposed to bad
    /// input or a domain violation).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Numerical { .. } => true,
            Error::AtParameter { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
