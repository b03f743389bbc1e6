//! Numerical integration engines for the singular, oscillatory, semi-infinite
//! integrals and sphere averages the moment formulas require.

mod gauss;
mod radial;
mod sphere;
mod tails;

pub use gauss::{adaptive_gk, gauss_legendre, GaussLegendre};
pub use radial::{
    generalized_cf_radial_integral, kernel_remainder_integral, radial_remainder_integral,
    RadialCfProfile,
};
pub use sphere::{sphere_average, SphereAverage};
pub use tails::{CosGaussTerm, DecayEnvelope, TailSpec};

use crate::error::{Error, Result};
use crate::real::Real;

/// Which deterministic (or Monte Carlo) rule backs a sphere average.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereRule {
    /// d = 1: the sphere is two points; the average is exact.
    Exact1d,
    /// d = 2: composite Gauss-Legendre in the polar angle.
    PolarGauss2d,
    /// d = 3: product Gauss rule in (cos theta, phi).
    PolarGauss3d,
    /// Any d: normalized-Gaussian direction sampling with a standard error.
    MonteCarlo,
}

impl SphereRule {
    /// Deterministic default for the dimension.
    pub fn for_dimension(d: usize) -> Self {
        match d {
            1 => SphereRule::Exact1d,
            2 => SphereRule::PolarGauss2d,
            3 => SphereRule::PolarGauss3d,
            _ => SphereRule::MonteCarlo,
        }
    }

    pub fn matches_dimension(self, d: usize) -> bool {
        match self {
            SphereRule::Exact1d => d == 1,
            SphereRule::PolarGauss2d => d == 2,
            SphereRule::PolarGauss3d => d == 3,
            SphereRule::MonteCarlo => d >= 1,
        }
    }
}

/// Tolerances and layout knobs for the integration engines.
#[derive(Debug, Clone)]
pub struct QuadratureConfig<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_subdivisions: usize,
    /// Boundary between the series-evaluated near-zero regime and the middle
    /// adaptive regime, in units of the oscillation argument.
    pub split_point: T,
    /// Truncation radius beyond which tails are summed in closed form,
    /// alternation-accelerated, or bounded; may be extended internally when a
    /// tail needs more room.
    pub tail_cutoff: T,
    pub sphere_rule: SphereRule,
    pub sphere_nodes_or_samples: usize,
    pub seed: u64,
    /// Evaluate the radial slice once (at e_1) for models whose law is
    /// invariant under rotations. Disable to force the full sphere rule.
    pub use_isotropy_shortcut: bool,
}

impl<T: Real> QuadratureConfig<T> {
    /// Defaults for closed-form validation paths.
    pub fn closed_form() -> Self {
        QuadratureConfig {
            abs_tol: T::of(1e-14),
            rel_tol: T::of(1e-8),
            max_subdivisions: 400,
            split_point: T::one(),
            tail_cutoff: T::of(40.0),
            sphere_rule: SphereRule::MonteCarlo,
            sphere_nodes_or_samples: 32_768,
            seed: 0,
            use_isotropy_shortcut: true,
        }
    }

    /// Defaults for characteristic-functional moment paths, where Monte Carlo
    /// noise downstream dominates anything past 1e-6.
    pub fn cf_moments() -> Self {
        QuadratureConfig {
            rel_tol: T::of(1e-6),
            ..Self::closed_form()
        }
    }

    pub fn with_dimension(mut self, d: usize) -> Self {
        self.sphere_rule = SphereRule::for_dimension(d);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self, d: Option<usize>) -> Result<()> {
        if !(self.abs_tol > T::zero() && self.rel_tol > T::zero()) {
            return Err(Error::domain("tolerances must be positive"));
        }
        if !(self.split_point > T::zero() && self.split_point < self.tail_cutoff) {
            return Err(Error::domain("need 0 < split_point < tail_cutoff"));
        }
        if self.sphere_nodes_or_samples == 0 {
            return Err(Error::domain("sphere rule needs a node or sample budget"));
        }
        if let Some(d) = d {
            if !self.sphere_rule.matches_dimension(d) {
                return Err(Error::domain(format!(
                    "sphere rule {:?} does not match dimension {d}",
                    self.sphere_rule
                )));
            }
        }
        Ok(())
    }

    /// Absolute error budget once an estimate of the value's scale is known.
    pub fn budget(&self, scale: T) -> T {
        self.abs_tol.max(self.rel_tol * scale.abs())
    }
}

impl<T: Real> Default for QuadratureConfig<T> {
    fn default() -> Self {
        Self::closed_form()
    }
}

/// Integral estimate with an error bound the engines try to keep honest.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub error_bound: T,
    pub evaluations: usize,
    /// Whether the bound met the requested tolerance.
    pub converged: bool,
}

impl<T: Real> QuadResult<T> {
    pub fn exact(value: T) -> Self {
        QuadResult {
            value,
            error_bound: T::zero(),
            evaluations: 0,
            converged: true,
        }
    }

    /// Turn a non-converged result into a tolerance error.
    pub fn require_converged(self, requested: T) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::Tolerance {
                achieved: self.error_bound.as_f64(),
                requested: requested.as_f64(),
            })
        }
    }
}
