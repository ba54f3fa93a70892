use thiserror::Error;

use crate::quad::QuadratureResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric parameter violated its documented range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A function was evaluated outside its real domain.
    #[error("domain error in `{node}`: {reason}")]
    Domain { node: String, reason: String },

    #[error("syntax error at byte {offset}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
        found: String,
    },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    /// An iterative process (series, extrapolation, limit) did not settle.
    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("quadrature tolerance not met: best estimate {} (error estimate {:e}, {} subdivisions)",
        .0.value, .0.abs_error_estimate, .0.subdivisions)]
    ToleranceNotMet(QuadratureResult),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no witness found: {0}")]
    NotFound(String),

    #[error("overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors raised by an iterative numerical method rather than by
    /// bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence(_) | Error::ToleranceNotMet(_) | Error::NotFound(_) | Error::Overflow(_)
        )
    }
}
