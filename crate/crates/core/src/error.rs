use thiserror::Error;

/// Errors raised by the numerical kernels and the functionals built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature did not converge: error estimate {error:.3e} above tolerance {tolerance:.3e} after {subdivisions} subdivisions")]
    NonConvergence {
        value: f64,
        error: f64,
        tolerance: f64,
        subdivisions: usize,
    },

    #[error("integral appears to diverge (estimate grew from {from:.3e} to {to:.3e})")]
    DivergenceSuspected { from: f64, to: f64 },

    #[error("integrand is not finite at r = {r:e}")]
    NonFinite { r: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("quadrature failure in {context}: {source}")]
    QuadratureFailure {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("radial Laplacian is singular at the origin (u' ~ r^{exponent})")]
    SingularAtOrigin { exponent: f64 },

    #[error("decay violation: {0}")]
    DecayViolation(String),

    #[error("profile is identically zero")]
    ZeroFunction,

    #[error("denominator {value:e} is not positive")]
    DegenerateDenominator { value: f64 },

    #[error("basis of size {size} exceeds the limit {limit}")]
    BudgetExceeded { size: usize, limit: usize },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    EigensolveFailure { sweeps: usize, off_norm: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn quadrature(context: impl Into<String>, source: Error) -> Self {
        match source {
            // keep nesting shallow
            Error::QuadratureFailure { .. } => source,
            other => Error::QuadratureFailure {
                context: context.into(),
                source: Box::new(other),
            },
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True when the underlying cause is a suspected divergent integral.
    pub fn is_divergence(&self) -> bool {
        match self {
            Error::DivergenceSuspected { .. } => true,
            Error::QuadratureFailure { source, .. } => source.is_divergence(),
            _ => false,
        }
    }
}
