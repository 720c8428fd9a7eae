use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Operation not defined for the given parameters (e.g. fractional `s`
    /// where only `s = 1, 2` are supported).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Adaptive quadrature exhausted its subdivision budget before reaching
    /// the requested tolerance. The best estimate is reported.
    #[error(
        "quadrature did not converge: requested rel_tol {requested:e}, \
         achieved {achieved:e}, estimate {estimate:e}"
    )]
    QuadratureConvergence {
        requested: f64,
        achieved: f64,
        estimate: f64,
    },

    /// Step size underflow in the ODE integrator.
    #[error("step size underflow at r = {r}")]
    StepUnderflow { r: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}
