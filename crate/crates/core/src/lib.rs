//! Numerical toolkit for pth moments of random vectors in Euclidean space:
//! sharp constants of von Bahr-Esseen-type inequalities, moment formulas
//! driven by characteristic functionals, and seeded statistical verification
//! of the corresponding Hilbert-space inequalities.
//!
//! The numeric core is generic over the scalar type (`f32` / `f64`) through
//! the [`Real`] trait; the concrete aliases at the crate root fix `f64`,
//! which is what the CLI and the acceptance suites use.

pub mod cf_moments;
pub mod constants;
pub mod error;
pub mod kernels;
pub mod lab;
pub mod optimize;
pub mod quadrature;
pub mod real;
pub mod rng;
pub mod special;

pub use error::{Error, Result};
pub use real::Real;

use error::Error as E;

pub(crate) fn d_validate(d: usize) -> Result<()> {
    if d == 0 {
        Err(E::domain("dimension d must be at least 1"))
    } else {
        Ok(())
    }
}

/// Default scalar for the CLI and test suites.
pub type DefaultReal = f64;

/// Concrete `f64` aliases for the main public types.
pub type MomentOrder64 = kernels::MomentOrder<f64>;
pub type QuadratureConfig64 = quadrature::QuadratureConfig<f64>;
pub type Model64 = cf_moments::RandomVectorModel<f64>;
pub type Report64 = lab::InequalityReport<f64>;
