use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("argument {z} lies on the branch cut [1, +inf); an explicit branch is required")]
    OnCut { z: f64 },

    #[error("series did not converge within {terms} terms")]
    Convergence { terms: usize },

    #[error("series diverges: ratio {ratio} is not below 1")]
    Divergent { ratio: f64 },

    #[error("quadrature did not reach tolerance {tolerance:e} (estimate {estimate:e})")]
    Quadrature { estimate: f64, tolerance: f64 },

    #[error("evaluation on a singular locus: {0}")]
    Singular(String),

    #[error("degenerate level set: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
