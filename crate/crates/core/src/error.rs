use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the routine.
    #[error("domain error in {routine}: {reason}")]
    Domain { routine: &'static str, reason: String },

    /// An iterative procedure hit its iteration cap before reaching tolerance.
    #[error("{routine} did not converge within {iterations} iterations")]
    Convergence { routine: &'static str, iterations: usize },

    /// The requested order or variant is not implemented.
    #[error("unsupported {what}: {value}")]
    Unsupported { what: &'static str, value: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(routine: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain { routine, reason: reason.into() }
    }

    pub(crate) fn convergence(routine: &'static str, iterations: usize) -> Self {
        Error::Convergence { routine, iterations }
    }

    pub(crate) fn unsupported(what: &'static str, value: impl ToString) -> Self {
        Error::Unsupported { what, value: value.to_string() }
    }
}
