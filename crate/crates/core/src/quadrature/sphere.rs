//! Averages over the unit sphere with respect to the uniform distribution.
//!
//! d = 1 is exact, d = 2 and d = 3 use deterministic antipodally-paired
//! Gauss rules (so even integrands average identically under negation of the
//! argument), higher dimensions fall back to normalized-Gaussian Monte Carlo
//! with counter-based streams.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::d_validate;
use crate::error::Result;
use crate::real::Real;
use crate::rng::{CounterRng, RunningStats};

use super::gauss::{gauss_legendre, GaussLegendre};
use super::{QuadratureConfig, SphereRule};

/// Result of a sphere average.
#[derive(Debug, Clone, Copy)]
pub struct SphereAverage<T> {
    pub value: T,
    /// Monte Carlo standard error, when the rule is stochastic.
    pub std_error: Option<T>,
    /// Deterministic rules: coarse/fine disagreement. Monte Carlo: the
    /// standard error.
    pub error_estimate: T,
    pub evaluations: usize,
}

struct Panel<T> {
    a: T,
    b: T,
    fine: T,
    err: T,
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<T: Real> Eq for Panel<T> {}
impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
    }
}

/// Adaptive composite panel integration with a fine (16) vs coarse (8) rule
/// disagreement driving refinement; `h` integrates over [lo, hi]. Stops when
/// the summed disagreement meets max(abs_tol, rel_tol |I|) or the evaluation
/// budget is spent.
#[allow(clippy::too_many_arguments)]
fn adaptive_panels<T: Real>(
    h: &mut impl FnMut(T) -> Result<T>,
    lo: T,
    hi: T,
    initial: &[T],
    eval_budget: usize,
    abs_tol: T,
    rel_tol: T,
    fine: &GaussLegendre<T>,
    coarse: &GaussLegendre<T>,
) -> Result<(T, T, usize)> {
    let mut evals = 0usize;
    let mut heap = BinaryHeap::new();
    let mut total_value = T::zero();
    let mut total_err = T::zero();
    let mut rate = |a: T, b: T, evals: &mut usize| -> Result<Panel<T>> {
        let mut out = Ok(());
        let mut wrap = |x: T| match h(x) {
            Ok(v) => v,
            Err(e) => {
                if out.is_ok() {
                    out = Err(e);
                }
                T::zero()
            }
        };
        let f = fine.integrate(&mut wrap, a, b);
        let c = coarse.integrate(&mut wrap, a, b);
        *evals += fine.nodes.len() + coarse.nodes.len();
        out?;
        Ok(Panel {
            a,
            b,
            fine: f,
            err: (f - c).abs(),
        })
    };
    let mut bounds = vec![lo];
    bounds.extend(initial.iter().copied().filter(|&x| x > lo && x < hi));
    bounds.push(hi);
    for w in bounds.windows(2) {
        let p = rate(w[0], w[1], &mut evals)?;
        total_value += p.fine;
        total_err += p.err;
        heap.push(p);
    }
    while evals < eval_budget && total_err > abs_tol.max(rel_tol * total_value.abs()) {
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = T::of(0.5) * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || worst.err == T::zero() {
            heap.push(worst);
            break;
        }
        let left = rate(worst.a, mid, &mut evals)?;
        let right = rate(mid, worst.b, &mut evals)?;
        total_value = total_value - worst.fine + left.fine + right.fine;
        total_err = total_err - worst.err + left.err + right.err;
        heap.push(left);
        heap.push(right);
    }
    Ok((total_value, total_err, evals))
}

/// Average of `f` over the unit sphere of R^d under the uniform distribution.
pub fn sphere_average<T: Real>(
    f: &mut impl FnMut(&[T]) -> Result<T>,
    d: usize,
    cfg: &QuadratureConfig<T>,
) -> Result<SphereAverage<T>> {
    d_validate(d)?;
    cfg.validate(Some(d))?;
    let budget = cfg.sphere_nodes_or_samples;
    match cfg.sphere_rule {
        SphereRule::Exact1d => {
            let half = T::of(0.5);
            let v = half * (f(&[T::one()])? + f(&[-T::one()])?);
            Ok(SphereAverage {
                value: v,
                std_error: None,
                error_estimate: T::zero(),
                evaluations: 2,
            })
        }
        SphereRule::PolarGauss2d => {
            let fine = gauss_legendre::<T>(16);
            let coarse = gauss_legendre::<T>(8);
            let pi = T::PI();
            let mut h = |theta: T| -> Result<T> {
                let (s, c) = (theta.sin(), theta.cos());
                let v1 = f(&[c, s])?;
                let v2 = f(&[-c, -s])?;
                Ok(T::of(0.5) * (v1 + v2))
            };
            // panel boundaries include pi/2 so coordinate-kinked integrands
            // (|w . e1|^p and friends) stay smooth inside panels
            let quarters: Vec<T> = (1..8).map(|i| pi * T::of_usize(i) / T::of(8.0)).collect();
            let (raw, err, evals) = adaptive_panels(
                &mut h,
                T::zero(),
                pi,
                &quarters,
                budget.max(192),
                cfg.abs_tol * pi,
                cfg.rel_tol,
                &fine,
                &coarse,
            )?;
            Ok(SphereAverage {
                value: raw / pi,
                std_error: None,
                error_estimate: err / pi,
                evaluations: 2 * evals,
            })
        }
        SphereRule::PolarGauss3d => {
            let fine = gauss_legendre::<T>(16);
            let coarse = gauss_legendre::<T>(8);
            let m_phi = 32usize;
            let two_pi = T::of(2.0) * T::PI();
            let mut h = |u: T| -> Result<T> {
                let s = (T::one() - u * u).max(T::zero()).sqrt();
                let mut acc = T::zero();
                for i in 0..m_phi {
                    let phi = two_pi * T::of_usize(i) / T::of_usize(m_phi);
                    let (cp, sp) = (phi.cos(), phi.sin());
                    let w = [u, s * cp, s * sp];
                    let wn = [-u, -s * cp, -s * sp];
                    acc += T::of(0.5) * (f(&w)? + f(&wn)?);
                }
                Ok(acc / T::of_usize(m_phi))
            };
            let inner = (budget / (2 * m_phi)).max(768);
            let halves = [T::of(0.25), T::of(0.5), T::of(0.75)];
            let (raw, err, evals) = adaptive_panels(
                &mut h,
                T::zero(),
                T::one(),
                &halves,
                inner,
                cfg.abs_tol,
                cfg.rel_tol,
                &fine,
                &coarse,
            )?;
            Ok(SphereAverage {
                value: raw,
                std_error: None,
                error_estimate: err,
                evaluations: 2 * m_phi * evals,
            })
        }
        SphereRule::MonteCarlo => {
            let mut stats = RunningStats::<T>::new();
            let mut dir = vec![T::zero(); d];
            for i in 0..budget.max(2) {
                let mut rng = CounterRng::new(cfg.seed, i as u64);
                rng.unit_vector(&mut dir);
                stats.push(f(&dir)?);
            }
            let se = stats.std_error();
            Ok(SphereAverage {
                value: stats.mean(),
                std_error: Some(se),
                error_estimate: se,
                evaluations: budget,
            })
        }
    }
}
