//! The named constants: the sharp von Bahr-Esseen factor C_p and its
//! relatives kappa_p, the kernel constant K_p, the radial constant C_{d,p}
//! in both circulating closed forms, and the pairwise-independence factors
//! K_1(p), K_2(p).

use crate::error::{Error, Result};
use crate::kernels::{sphere_pth_moment, sphere_surface_area, MomentOrder};
use crate::optimize::{grid_then_golden_max, grid_then_golden_min, linear_grid_open, log_grid};
use crate::quadrature::{kernel_remainder_integral, sphere_average, QuadResult, QuadratureConfig};
use crate::real::Real;
use crate::special::ln_gamma;

/// An extremum-defined constant together with where and how well it was found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpConstantResult<T> {
    pub value: T,
    /// Location of the extremum in the optimizer's domain.
    pub argmax_or_argmin: T,
    /// Which defining optimization this is.
    pub domain_note: &'static str,
    /// Bracket width achieved by the grid-plus-golden refinement.
    pub tolerance_achieved: T,
}

/// The radial constant in both closed forms, plus the defining-integral
/// oracle for small dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialConstantResult<T> {
    /// Component product with the standard surface area of S^{d-1}; the
    /// library treats this as the canonical value.
    pub canonical_value: T,
    /// The alternative closed form built on the S^d surface-area convention.
    pub alt_value: T,
    /// Direct polar quadrature of the defining integral, for d <= 3.
    pub oracle_value: Option<T>,
    /// True when canonical and alternative forms disagree beyond 1e-9 relative.
    pub discrepancy_flag: bool,
}

const X_TOL: f64 = 1e-10;

/// ell(p, x) = (1 - x)^p - x^p + p x^{p-1} on 1 < p <= 2, 0 < x < 1.
pub fn ell<T: Real>(p: T, x: T) -> Result<T> {
    if !(p > T::one() && p <= T::of(2.0)) {
        return Err(Error::domain(format!("ell needs p in (1, 2], got {p}")));
    }
    if !(x > T::zero() && x < T::one()) {
        return Err(Error::domain(format!("ell needs x in (0, 1), got {x}")));
    }
    Ok((T::one() - x).powf(p) - x.powf(p) + p * x.powf(p - T::one()))
}

fn unit_interval_grid<T: Real>() -> Vec<T> {
    // Uniform backbone plus log-spaced refinement near both endpoints: the
    // maximizers wander into boundary layers as p approaches 1.
    let mut grid = linear_grid_open(T::zero(), T::one(), 10_000);
    grid.extend(log_grid(T::of(1e-12), T::of(0.1), 2_500));
    grid.extend(
        log_grid(T::of(1e-12), T::of(0.1), 2_500)
            .into_iter()
            .map(|x| T::one() - x),
    );
    // points too close to an endpoint can collapse onto it in low precision
    grid.retain(|&x| x > T::zero() && x < T::one());
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();
    grid
}

/// Best constant in the von Bahr-Esseen inequality for 1 < p <= 2:
/// C_p = max over x in (0, 1) of ell(p, x). Decreases from 2 (p -> 1+) to 1
/// (p = 2).
pub fn best_vbe_constant<T: Real>(p: T) -> Result<SharpConstantResult<T>> {
    if !(p > T::one() && p <= T::of(2.0)) {
        return Err(Error::domain(format!(
            "C_p is defined for p in (1, 2], got {p}"
        )));
    }
    let grid = unit_interval_grid::<T>();
    let ext = grid_then_golden_max(|x| ell(p, x).unwrap(), &grid, T::of(X_TOL), 200);
    Ok(SharpConstantResult {
        value: ext.value,
        argmax_or_argmin: ext.x,
        domain_note: "C_p = max_{x in (0,1)} ell(p, x)",
        tolerance_achieved: T::of(X_TOL),
    })
}

/// kappa objective (c^{p-1} + (1-c)^{p-1}) (c^{1/(p-1)} + (1-c)^{1/(p-1)})^{p-1}
/// on c in [0, 1/2]; 0^{positive} evaluates to 0, covering the c = 0 endpoint
/// by its continuous limit.
pub fn kappa_objective<T: Real>(p: T, c: T) -> Result<T> {
    if !(p > T::one() && p <= T::of(2.0)) {
        return Err(Error::domain(format!("kappa needs p in (1, 2], got {p}")));
    }
    if !(c >= T::zero() && c <= T::of(0.5)) {
        return Err(Error::domain(format!(
            "kappa objective needs c in [0, 1/2], got {c}"
        )));
    }
    let one = T::one();
    let q = one / (p - one);
    let first = c.powf(p - one) + (one - c).powf(p - one);
    let second = (c.powf(q) + (one - c).powf(q)).powf(p - one);
    Ok(first * second)
}

/// kappa_p = max over c in [0, 1/2] of the kappa objective; decreases from 2
/// (p -> 1+) to 1 (p = 2).
pub fn kappa<T: Real>(p: T) -> Result<SharpConstantResult<T>> {
    if !(p > T::one() && p <= T::of(2.0)) {
        return Err(Error::domain(format!(
            "kappa_p is defined for p in (1, 2], got {p}"
        )));
    }
    let mut grid: Vec<T> = vec![T::zero()];
    grid.extend(log_grid(T::of(1e-12), T::of(0.5), 7_500));
    grid.extend(linear_grid_open(T::zero(), T::of(0.5), 7_500));
    grid.push(T::of(0.5));
    // log_grid's endpoint can land an ulp past 1/2
    for c in grid.iter_mut() {
        *c = (*c).min(T::of(0.5));
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();
    let ext = grid_then_golden_max(|c| kappa_objective(p, c).unwrap(), &grid, T::of(X_TOL), 200);
    Ok(SharpConstantResult {
        value: ext.value,
        argmax_or_argmin: ext.x,
        domain_note: "kappa_p = max_{c in [0,1/2]} kappa objective",
        tolerance_achieved: T::of(X_TOL),
    })
}

/// Kernel constant K_p = - pi / (2 Gamma(p+1) sin(pi p / 2)), the value of
/// integral_0^inf c_m(z) z^{-(p+1)} dz for p > 0 not an even integer.
/// Negative when floor(p/2) is even, positive when odd.
pub fn bahr_kernel_constant<T: Real>(p: &MomentOrder<T>) -> Result<T> {
    if p.is_even_integer() {
        return Err(Error::domain(
            "K_p undefined: sin(pi p / 2) vanishes at even integers",
        ));
    }
    let pv = p.p();
    let half_pi = T::PI() * T::of(0.5);
    let value = -half_pi * (-ln_gamma(pv + T::one())).exp() / (half_pi * pv).sin();
    debug_assert!(
        (p.kernel_order() % 2 == 0) == (value < T::zero()),
        "K_p sign must alternate with floor(p/2)"
    );
    Ok(value)
}

/// Alternative closed form for the radial constant, built on the S^d
/// surface-area convention:
/// -pi^{d/2} Gamma(d/2) Gamma((p+1)/2) / (sin(pi p/2) Gamma((d+1)/2) Gamma(p+1) Gamma((p+d)/2)).
fn radial_constant_alt_form<T: Real>(d: usize, p: T) -> T {
    let half = T::of(0.5);
    let df = T::of_usize(d);
    let ln_mag = df * half * T::PI().ln() + ln_gamma(df * half) + ln_gamma((p + T::one()) * half)
        - ln_gamma((df + T::one()) * half)
        - ln_gamma(p + T::one())
        - ln_gamma((p + df) * half);
    -ln_mag.exp() / (T::PI() * half * p).sin()
}

/// Radial constant C_{d,p}: the proportionality factor in
/// integral_{R^d} |t|^{-(p+d)} c_m(t . x) dt = C_{d,p} |x|^p.
///
/// `canonical_value` is the component product
/// area(S^{d-1}) * K_p * E|w . e_1|^p; `alt_value` is the closed form above.
/// They coincide at d = 1 and differ by sqrt(pi) Gamma((d+1)/2) / Gamma(d/2)
/// for d >= 2; the defining-integral oracle (`oracle_value`, d <= 3)
/// arbitrates, so neither form is silently preferred.
pub fn radial_constant<T: Real>(
    d: usize,
    p: &MomentOrder<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<RadialConstantResult<T>> {
    crate::d_validate(d)?;
    if p.is_even_integer() {
        return Err(Error::domain("C_{d,p} undefined at even integer p"));
    }
    let area = sphere_surface_area::<T>(d)?.canonical;
    let k_p = bahr_kernel_constant(p)?;
    let moment = sphere_pth_moment(d, p.p())?;
    let canonical_value = area * k_p * moment;
    let alt_value = radial_constant_alt_form(d, p.p());

    let oracle_value = if d <= 3 {
        Some(radial_constant_oracle(d, p, cfg)?.value)
    } else {
        None
    };

    let discrepancy_flag =
        (canonical_value - alt_value).abs() > T::of(1e-9) * canonical_value.abs();
    Ok(RadialConstantResult {
        canonical_value,
        alt_value,
        oracle_value,
        discrepancy_flag,
    })
}

/// Direct polar quadrature of the defining integral
/// integral_{R^d} |t|^{-(p+d)} c_m(t . e_1) dt: the sphere average of the
/// scale-a radial integral (a = w . e_1, no homogeneity shortcut) times the
/// surface area of S^{d-1}.
pub fn radial_constant_oracle<T: Real>(
    d: usize,
    p: &MomentOrder<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<QuadResult<T>> {
    let cfg_d = cfg.clone().with_dimension(d);
    let area = sphere_surface_area::<T>(d)?.canonical;
    let mut evals = 0usize;
    let mut bound_acc = T::zero();
    let mut f = |w: &[T]| -> Result<T> {
        let r = kernel_remainder_integral(p, w[0], &cfg_d)?;
        evals += r.evaluations;
        bound_acc = bound_acc.max(r.error_bound);
        Ok(r.value)
    };
    let avg = sphere_average(&mut f, d, &cfg_d)?;
    let value = area * avg.value;
    let error_bound = area * (avg.error_estimate + bound_acc);
    Ok(QuadResult {
        value,
        error_bound,
        evaluations: evals,
        converged: true,
    })
}

/// K_1(p) = min over eps > 0 of 4 (eps+1)^2 / (eps^2 (2-p)^2) + eps + 2,
/// for 1 <= p < 2. Satisfies K_1(p) >= 4 / (2-p)^2 + 2, so it explodes
/// inverse-quadratically as p -> 2-.
pub fn pairwise_k1<T: Real>(p: T) -> Result<SharpConstantResult<T>> {
    if !(p >= T::one() && p < T::of(2.0)) {
        return Err(Error::domain(format!(
            "K_1 is defined for p in [1, 2), got {p}"
        )));
    }
    let four = T::of(4.0);
    let two = T::of(2.0);
    let gap = two - p;
    let objective = move |eps: T| {
        let ratio = (eps + T::one()) / eps;
        four * ratio * ratio / (gap * gap) + eps + two
    };
    let grid = log_grid(T::of(1e-3), T::of(1e6), 2000);
    let ext = grid_then_golden_min(objective, &grid, T::of(1e-9), 300);
    let floor = four / (gap * gap) + two;
    debug_assert!(ext.value >= floor, "K_1 must dominate its lower bound");
    Ok(SharpConstantResult {
        value: ext.value,
        argmax_or_argmin: ext.x,
        domain_note: "K_1(p) = min_{eps > 0} 4 (eps+1)^2 / (eps^2 (2-p)^2) + eps + 2",
        tolerance_achieved: T::of(1e-9),
    })
}

/// K_2(p) = 4 / (p-1) + 8 / (2-p) on 1 < p < 2; explodes at both endpoints,
/// but only inverse-linearly as p -> 2-.
pub fn pairwise_k2<T: Real>(p: T) -> Result<T> {
    if !(p > T::one() && p < T::of(2.0)) {
        return Err(Error::domain(format!(
            "K_2 is defined for p in (1, 2), got {p}"
        )));
    }
    Ok(T::of(4.0) / (p - T::one()) + T::of(8.0) / (T::of(2.0) - p))
}

/// Ratio of the combined earlier factor K_12 = min(K_1, K_2) to the factor
/// 4 / (2-p); at least 2 everywhere on (1, 2).
pub fn pairwise_ratio<T: Real>(p: T) -> Result<T> {
    let k1 = pairwise_k1(p)?.value;
    let k2 = pairwise_k2(p)?;
    let bound = T::of(4.0) / (T::of(2.0) - p);
    Ok(k1.min(k2) / bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ell_values() {
        // (1-x)^2 - x^2 + 2x = 1 identically
        assert!((ell(2.0f64, 0.3).unwrap() - 1.0).abs() < 1e-14);
        assert!((ell(2.0f64, 0.77).unwrap() - 1.0).abs() < 1e-14);
        let v = ell(1.5f64, 0.25).unwrap();
        let want = 0.75f64.powf(1.5) - 0.25f64.powf(1.5) + 1.5 * 0.5;
        assert!((v - want).abs() < 1e-15);
        assert!((want - 1.27452).abs() < 1e-5);
        // x -> 0+ limit is 1
        assert!((ell(1.5f64, 1e-12).unwrap() - 1.0).abs() < 1e-5);
        assert!(ell(1.0f64, 0.5).is_err());
        assert!(ell(1.5f64, 0.0).is_err());
        assert!(ell(1.5f64, 1.0).is_err());
        assert!(ell(2.5f64, 0.5).is_err());
    }

    #[test]
    fn vbe_constant_endpoints() {
        let c2 = best_vbe_constant(2.0f64).unwrap();
        assert!((c2.value - 1.0).abs() < 1e-12, "C_2 = {}", c2.value);
        let c_near_1 = best_vbe_constant(1.001f64).unwrap();
        assert!(
            (c_near_1.value - 2.0).abs() < 0.01,
            "C_1.001 = {}",
            c_near_1.value
        );
        assert!(best_vbe_constant(1.0f64).is_err());
        assert!(best_vbe_constant(2.1f64).is_err());
    }

    #[test]
    fn vbe_constant_interior_stationarity() {
        for p in [1.2f64, 1.5, 1.8] {
            let c = best_vbe_constant(p).unwrap();
            let h = 1e-5;
            let x = c.argmax_or_argmin;
            let d = (ell(p, x + h).unwrap() - ell(p, x - h).unwrap()) / (2.0 * h);
            assert!(d.abs() < 1e-4, "p={p}: gradient {d:e} at x={x}");
            assert!(c.value > 1.0 && c.value < 2.0);
        }
    }

    #[test]
    fn kappa_endpoints_and_objective() {
        let k2 = kappa(2.0f64).unwrap();
        assert!((k2.value - 1.0).abs() < 1e-12);
        for p in [1.2f64, 1.5, 1.8] {
            assert!(
                (kappa_objective(p, 0.0).unwrap() - 1.0).abs() < 1e-12,
                "c=0, p={p}"
            );
            assert!(
                (kappa_objective(p, 0.5).unwrap() - 1.0).abs() < 1e-12,
                "c=1/2, p={p}"
            );
        }
        let near1 = kappa(1.001f64).unwrap();
        assert!(
            (near1.value - 2.0).abs() < 0.05,
            "kappa(1.001) = {}",
            near1.value
        );
    }

    #[test]
    fn kernel_constant_closed_forms() {
        let k1 = bahr_kernel_constant(&MomentOrder::non_even(1.0).unwrap()).unwrap();
        assert!((k1 + PI / 2.0).abs() < 1e-14);
        let k3 = bahr_kernel_constant(&MomentOrder::non_even(3.0).unwrap()).unwrap();
        assert!((k3 - PI / 12.0).abs() < 1e-14);
        let k_half = bahr_kernel_constant(&MomentOrder::non_even(0.5).unwrap()).unwrap();
        assert!(
            (k_half + (2.0 * PI).sqrt()).abs() < 1e-13,
            "K_0.5 = {k_half}"
        );
        assert!(bahr_kernel_constant(&MomentOrder::new(4.0).unwrap()).is_err());
    }

    #[test]
    fn radial_constant_d1() {
        let cfg = QuadratureConfig::closed_form();
        let p = MomentOrder::non_even(1.0).unwrap();
        let r = radial_constant(1, &p, &cfg).unwrap();
        assert!(
            (r.canonical_value + PI).abs() < 1e-12,
            "canonical {}",
            r.canonical_value
        );
        assert!((r.alt_value + PI).abs() < 1e-12);
        assert!(!r.discrepancy_flag);
        let oracle = r.oracle_value.unwrap();
        assert!(((oracle + PI) / PI).abs() < 1e-6, "oracle {oracle}");

        let p3 = MomentOrder::non_even(3.0).unwrap();
        let r3 = radial_constant(1, &p3, &cfg).unwrap();
        assert!(!r3.discrepancy_flag);
        assert!(((r3.canonical_value - r3.alt_value) / r3.canonical_value).abs() < 1e-12);
    }

    #[test]
    fn radial_constant_d2_discrepancy() {
        let cfg = QuadratureConfig::closed_form();
        let p = MomentOrder::non_even(1.0).unwrap();
        let r = radial_constant(2, &p, &cfg).unwrap();
        assert!(
            (r.canonical_value + 2.0 * PI).abs() < 1e-10,
            "canonical {}",
            r.canonical_value
        );
        assert!((r.alt_value + 4.0).abs() < 1e-12, "alt {}", r.alt_value);
        assert!(r.discrepancy_flag);
        // The defining integral sides with the canonical component product.
        let oracle = r.oracle_value.unwrap();
        assert!(
            ((oracle - r.canonical_value) / r.canonical_value).abs() < 1e-4,
            "oracle {oracle} vs canonical {}",
            r.canonical_value
        );
    }

    #[test]
    fn pairwise_constants() {
        let k1 = pairwise_k1(1.5f64).unwrap();
        assert!(k1.value >= 4.0 / 0.25 + 2.0);
        assert!((k1.value - 29.776).abs() < 0.01, "K_1(1.5) = {}", k1.value);
        assert!(k1.argmax_or_argmin > 5.9 && k1.argmax_or_argmin < 7.0);
        assert!((pairwise_k2(1.5f64).unwrap() - 24.0).abs() < 1e-12);
        assert!((pairwise_ratio(1.5f64).unwrap() - 3.0).abs() < 1e-9);
        // p = 1.9: K_2 attains the min, ratio just above 2
        let r = pairwise_ratio(1.9f64).unwrap();
        let k2 = pairwise_k2(1.9f64).unwrap();
        let k1 = pairwise_k1(1.9f64).unwrap().value;
        assert!(k2 < k1);
        assert!((r - k2 / 40.0).abs() < 1e-9);
        assert!((k2 - (4.0 / 0.9 + 80.0)).abs() < 1e-12);
        assert!(pairwise_k2(1.0f64).is_err());
        assert!(pairwise_k2(2.0f64).is_err());
        assert!(pairwise_k1(2.0f64).is_err());
        assert!(pairwise_k1(0.9f64).is_err());
    }

    #[test]
    fn k1_explodes_quadratically_k2_linearly() {
        let k1_a = pairwise_k1(1.99f64).unwrap().value;
        let k1_floor = 4.0 / (0.01f64 * 0.01) + 2.0;
        assert!(k1_a >= k1_floor);
        let k2_a = pairwise_k2(1.99f64).unwrap();
        assert!(k2_a < k1_a, "near 2- the K_2 branch wins");
        // toward 1+ it flips
        let k1_b = pairwise_k1(1.01f64).unwrap().value;
        let k2_b = pairwise_k2(1.01f64).unwrap();
        assert!(k1_b < k2_b);
    }
}
