//! The moment engine: E ||X||^p through the characteristic functional,
//! Monte Carlo oracles, and the sphere-mixture identity check.

use crate::constants::bahr_kernel_constant;
use crate::error::{Error, Result};
use crate::kernels::{sphere_pth_moment, MomentOrder};
use crate::quadrature::{
    generalized_cf_radial_integral, sphere_average, QuadratureConfig, RadialCfProfile,
};
use crate::real::Real;
use crate::rng::{CounterRng, RunningStats, SeedTree};

use super::catalog::RandomVectorModel;

/// Norm-moment estimate produced by the characteristic-functional route.
#[derive(Debug, Clone, Copy)]
pub struct CfMomentEstimate<T> {
    pub value: T,
    /// Quadrature error bound combined across the radial and sphere stages.
    pub error_bound: T,
    /// Standard error of the sphere stage when it is Monte Carlo.
    pub std_error: Option<T>,
    pub evaluations: usize,
    pub converged: bool,
}

/// Plain Monte Carlo estimate with a batch-means standard error.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate<T> {
    pub value: T,
    pub std_error: T,
    pub samples: usize,
}

/// Residual report of the sphere-mixture identity.
#[derive(Debug, Clone, Copy)]
pub struct ResidualReport<T> {
    pub lhs: T,
    pub rhs: T,
    pub residual: T,
    pub std_error: T,
    /// residual / std_error (0 when the standard error vanishes).
    pub normalized: T,
}

/// Radial profile of the model along `omega`, ready for the cf integral.
fn profile_along<'a, T: Real>(
    model: &'a RandomVectorModel<T>,
    omega: &[T],
    kernel_order: usize,
) -> Result<RadialCfProfile<'a, T>> {
    let moments: Vec<T> = (0..=kernel_order)
        .map(|j| model.even_directional_moment(omega, j))
        .collect::<Result<Vec<_>>>()?;
    let tail = model.tail_spec(omega);
    let eval = model.radial_eval(omega);
    Ok(RadialCfProfile::new(move |r| eval.eval(r).0, moments, tail))
}

/// E ||X||^p by the nested reduction: a sphere average over directions of the
/// one-dimensional directional moment E |w . X|^p, each directional moment
/// recovered from the radial slice of the characteristic functional.
pub fn norm_moment_via_cf<T: Real>(
    model: &RandomVectorModel<T>,
    p: &MomentOrder<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<CfMomentEstimate<T>> {
    if p.is_even_integer() {
        return Err(Error::domain("cf route needs non-even-integer p"));
    }
    let d = model.dim();
    let m = p.kernel_order();
    if 2 * m > model.max_moment_order() {
        return Err(Error::MissingMoments { needed: 2 * m });
    }
    let cfg_d = cfg.clone().with_dimension(d);
    let k_p = bahr_kernel_constant(p)?;
    let c_mu = sphere_pth_moment(d, p.p())?;

    let mut evals = 0usize;
    let mut worst_bound = T::zero();
    let mut all_converged = true;
    // mixtures integrate leaf by leaf: the integral is linear in the weights
    // and each leaf keeps its own (sharper) tail handling
    let leaves = model.mixture_leaves();
    let mut directional = |omega: &[T]| -> Result<T> {
        let mut value = T::zero();
        let mut bound = T::zero();
        for (weight, leaf) in &leaves {
            let profile = profile_along(leaf, omega, m)?;
            let r = generalized_cf_radial_integral(&profile, p, &cfg_d)?;
            evals += r.evaluations;
            value += *weight * r.value;
            bound += weight.abs() * r.error_bound;
            all_converged &= r.converged;
        }
        worst_bound = worst_bound.max(bound);
        Ok(value / k_p)
    };

    if model.is_isotropic() && cfg.use_isotropy_shortcut {
        // the directional moment is constant over the sphere
        let mut e1 = vec![T::zero(); d];
        e1[0] = T::one();
        let m_p = directional(&e1)?;
        let value = m_p / c_mu;
        let error_bound = worst_bound / (k_p.abs() * c_mu);
        return Ok(CfMomentEstimate {
            value,
            error_bound,
            std_error: None,
            evaluations: evals,
            converged: all_converged,
        });
    }

    let avg = sphere_average(&mut directional, d, &cfg_d)?;
    let value = avg.value / c_mu;
    let error_bound = (avg.error_estimate + worst_bound / k_p.abs()) / c_mu;
    Ok(CfMomentEstimate {
        value,
        error_bound,
        std_error: avg.std_error.map(|s| s / c_mu),
        evaluations: evals + avg.evaluations,
        converged: all_converged,
    })
}

/// Monte Carlo estimate of E ||X||^p with a batch-means standard error.
pub fn norm_moment_mc<T: Real>(
    model: &RandomVectorModel<T>,
    p: T,
    n_samples: usize,
    seed: u64,
) -> Result<McEstimate<T>> {
    if n_samples < 2 {
        return Err(Error::domain("need at least 2 samples"));
    }
    if !(p > T::zero()) {
        return Err(Error::domain("exponent p must be positive"));
    }
    let d = model.dim();
    let n_batches = 64.min(n_samples / 2).max(2);
    let per_batch = n_samples / n_batches;
    let mut batch_stats = RunningStats::<T>::new();
    let mut x = vec![T::zero(); d];
    let mut total = T::zero();
    let mut used = 0usize;
    for b in 0..n_batches {
        let mut acc = T::zero();
        for i in 0..per_batch {
            let mut rng = CounterRng::new(seed, (b * per_batch + i) as u64);
            model.sample_into(&mut rng, &mut x);
            let nrm = x.iter().fold(T::zero(), |a, &v| a + v * v).sqrt();
            acc += nrm.powf(p);
        }
        total += acc;
        used += per_batch;
        batch_stats.push(acc / T::of_usize(per_batch));
    }
    let value = total / T::of_usize(used);
    let std_error = batch_stats.std_error();
    Ok(McEstimate {
        value,
        std_error,
        samples: used,
    })
}

/// Check E ||X||^p = (1 / c_{p,mu}) * average over directions of E |t . X|^p
/// with mu the uniform sphere distribution; both sides share the same sample
/// paths so the residual's standard error reflects only the difference.
pub fn mixture_identity_check<T: Real>(
    model: &RandomVectorModel<T>,
    p: T,
    n_samples: usize,
    n_directions: usize,
    seed: u64,
) -> Result<ResidualReport<T>> {
    if n_samples < 2 || n_directions == 0 {
        return Err(Error::domain(
            "need samples >= 2 and at least one direction",
        ));
    }
    let d = model.dim();
    let c_mu = sphere_pth_moment(d, p)?;
    let tree = SeedTree::new(seed);
    let dir_key = tree.child(0).key();
    let sample_key = tree.child(1).key();
    let mut lhs_stats = RunningStats::<T>::new();
    let mut rhs_stats = RunningStats::<T>::new();
    let mut diff_stats = RunningStats::<T>::new();
    let mut x = vec![T::zero(); d];
    let mut w = vec![T::zero(); d];
    for i in 0..n_samples {
        let mut rng = CounterRng::new(sample_key, i as u64);
        model.sample_into(&mut rng, &mut x);
        let nrm = x.iter().fold(T::zero(), |a, &v| a + v * v).sqrt();
        let lhs = nrm.powf(p);
        // fresh directions per sample keep the per-sample residuals
        // exactly zero-mean, so the standard error is honest
        let mut dir_rng = CounterRng::new(dir_key, i as u64);
        let mut proj = T::zero();
        for _ in 0..n_directions {
            dir_rng.unit_vector(&mut w);
            let t = w
                .iter()
                .zip(&x)
                .fold(T::zero(), |a, (&wi, &xi)| a + wi * xi);
            proj += t.abs().powf(p);
        }
        let rhs = proj / (T::of_usize(n_directions) * c_mu);
        lhs_stats.push(lhs);
        rhs_stats.push(rhs);
        diff_stats.push(lhs - rhs);
    }
    let residual = diff_stats.mean();
    let std_error = diff_stats.std_error();
    let normalized = if std_error > T::zero() {
        residual / std_error
    } else {
        T::zero()
    };
    Ok(ResidualReport {
        lhs: lhs_stats.mean(),
        rhs: rhs_stats.mean(),
        residual,
        std_error,
        normalized,
    })
}
