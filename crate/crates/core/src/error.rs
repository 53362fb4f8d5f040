use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A value violates a type invariant (negative mass, empty grid, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Adaptive quadrature ran out of subdivisions before meeting the tolerance.
    /// The best estimate and its error bound are kept so callers may flag
    /// rather than discard the value.
    #[error("quadrature did not converge: estimate {estimate} with error bound {error_bound:e} after {subdivisions} subdivisions")]
    NoConvergence {
        estimate: Complex64,
        error_bound: f64,
        subdivisions: usize,
    },

    /// The normalisation integral vanished: the particle is never found at this position.
    #[error("zero denominator: particle never found at any time at x = {x}")]
    ZeroDenominator { x: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
