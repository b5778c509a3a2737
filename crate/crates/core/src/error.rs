use thiserror::Error;

use crate::functions::RadialResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("eigenvalue seeding failed: {0}")]
    Eigen(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("not enough coefficients: {0}")]
    InsufficientCoefficients(String),
    #[error("normalization is degenerate: {0}")]
    DegenerateNormalization(String),
    #[error("method does not apply: {0}")]
    MethodMismatch(String),
    #[error("best Wronskian relative error {:.3e} exceeds ceiling {ceiling:.3e}", best.wronskian_rel_error.to_f64())]
    LowConfidence { best: Box<RadialResult>, ceiling: f64 },
    #[error(transparent)]
    Cache(#[from] crate::cache::CacheError),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
