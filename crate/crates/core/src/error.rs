use thiserror::Error;

use crate::expr::ParseError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    /// The evaluation point lies outside the natural domain of a function.
    #[error("domain error at u = {at}: {what}")]
    Domain { what: String, at: f64 },

    #[error(
        "quadrature on [{a}, {b}] did not converge (error estimate {estimate:e} after {subdivisions} subdivisions)"
    )]
    NoConvergence {
        a: f64,
        b: f64,
        estimate: f64,
        subdivisions: usize,
    },

    #[error("non-finite sample at x = {at}")]
    NonFinite { at: f64 },

    /// First fundamental form is (numerically) singular.
    #[error("degenerate immersion: {0}")]
    Degenerate(String),

    /// Second fundamental form is singular, the third form carries no metric.
    #[error("parabolic point: det II = {det:e}")]
    Parabolic { det: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn domain(what: impl Into<String>, at: f64) -> Self {
        Self::Domain { what: what.into(), at }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Self::Invalid(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
