use thiserror::Error;

/// Errors raised by the numerical routines and checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not converge after {terms} terms")]
    NonConvergence { terms: usize },

    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e} after {refinements} refinements")]
    Quadrature {
        estimate: f64,
        error: f64,
        refinements: usize,
    },

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("branch error: 1 + lambda*omega vanishes with a non-integer exponent")]
    Branch,

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("imaginary residue {residue:e} exceeds tolerance relative to {scale:e}")]
    ImaginaryResidue { residue: f64, scale: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
