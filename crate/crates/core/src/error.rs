use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    #[error("{op} did not converge within {iterations} iterations")]
    NoConvergence { op: &'static str, iterations: usize },

    #[error("{op}: non-finite result")]
    NonFinite { op: &'static str },

    #[error("quadrature budget exhausted after {panels} panels (partial estimate {partial:e})")]
    BudgetExceeded { panels: usize, partial: f64 },

    #[error("inversion produced {value:e}, outside the admissible range by more than {slack:e}")]
    OutOfRange { value: f64, slack: f64 },

    #[error("empty sample")]
    EmptySample,
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            op,
            msg: msg.into(),
        }
    }

    /// True for failures caused by an exhausted numerical budget or an
    /// inaccurate internal evaluation, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        !matches!(self, Error::Domain { .. } | Error::EmptySample)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
