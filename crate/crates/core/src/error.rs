use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("invalid monodromy: {0}")]
    InvalidMonodromy(String),

    #[error("invalid fiber class: {0}")]
    InvalidClass(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),

    #[error("not a chain map: {0}")]
    NotChainMap(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("overflow in integer arithmetic")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
