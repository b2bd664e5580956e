use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative solver ran out of iterations.
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },
    /// A quadrature rule did not reach its tolerance.
    #[error("quadrature did not converge (estimated error {err_est:e})")]
    Quadrature { err_est: f64 },
    /// The function does not change sign on the supplied interval.
    #[error("no sign change on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },
    /// Too few usable data points for a regression or estimate.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    /// The truncated change-of-coordinates system cannot be solved.
    #[error("near-singular system: |b_1| = {0:e}")]
    Singular(f64),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) => 2,
            _ => 3,
        }
    }
}
