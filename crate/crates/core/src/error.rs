use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the documented domain of an operation.
    #[error("domain violation: {0}")]
    Domain(String),

    /// A NaN or infinity where a finite value is required.
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    /// A quadrature or optimizer failed to reach the requested tolerance.
    #[error("tolerance not reached: achieved {achieved:e}, requested {requested:e}")]
    Tolerance { achieved: f64, requested: f64 },

    /// Near-zero order diagnostic of the characteristic-functional integrand failed:
    /// the subtracted integrand does not decay fast enough for the integral to
    /// converge, which suggests a moment mismatch or an infinite pth moment.
    #[error(
        "near-zero order check failed: integrand behaves like r^{estimated:.3} but needs \
         an exponent above {required:.3}; supplied moments may be wrong or E|X|^p = inf"
    )]
    NearZeroOrder { estimated: f64, required: f64 },

    /// Covariance matrix is not positive semidefinite.
    #[error("covariance matrix is not positive semidefinite")]
    InvalidCovariance,

    /// A model lacks the directional moments the moment engine needs.
    #[error("model does not provide directional moments up to order {needed}")]
    MissingMoments { needed: usize },

    /// A model lacks a closed-form characteristic functional.
    #[error("model does not expose a characteristic functional")]
    MissingCf,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
