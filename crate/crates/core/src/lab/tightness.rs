//! Empirical sharpness probe for the von Bahr-Esseen constant.
//!
//! Searches two-step scalar v-martingales with deterministic X_1 = x and a
//! conditionally centered two-point X_2 in {a, -b}, maximizing
//!
//! ```text
//! (E|S_2|^p - |x|^p) / E|X_2|^p
//! ```
//!
//! with exact expectations (no sampling). Sending a -> 0+ with b near x/x*
//! drives the ratio toward ell(p, x), so the family approaches C_p; whether
//! it attains C_p exactly is not claimed, only the achieved ratio is
//! reported.

use crate::constants::best_vbe_constant;
use crate::error::{Error, Result};
use crate::optimize::{golden_max, linear_grid_open, log_grid};
use crate::real::Real;

/// The witness two-step v-martingale: X_1 = x deterministic, X_2 = up with
/// probability up_prob, -down otherwise (zero mean: up_prob = down/(up+down)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStepWitness<T> {
    pub x1: T,
    pub up: T,
    pub down: T,
    pub up_prob: T,
}

#[derive(Debug, Clone, Copy)]
pub struct TightnessResult<T> {
    pub best_ratio: T,
    pub witness: TwoStepWitness<T>,
    /// C_p from the defining optimization, for comparison.
    pub sharp_constant: T,
    /// best_ratio / C_p.
    pub attainment: T,
}

/// (x + a)^p - x^p without cancellation for small a.
fn pow_diff<T: Real>(x: T, a: T, p: T) -> T {
    if a < x * T::of(0.5) {
        x.powf(p) * (p * (a / x).ln_1p()).exp_m1()
    } else {
        (x + a).powf(p) - x.powf(p)
    }
}

/// Exact ratio (E|S_2|^p - |x|^p) / E|X_2|^p for the two-point family.
pub fn two_step_ratio<T: Real>(p: T, x: T, up: T, down: T) -> T {
    // both branch probabilities formed directly: 1 - down/(up+down) would
    // shed most of its digits when up is tiny
    let total = up + down;
    let q_up = down / total;
    let q_down = up / total;
    let num = q_up * pow_diff(x, up, p) + q_down * ((x - down).abs().powf(p) - x.powf(p));
    let den = q_up * up.powf(p) + q_down * down.powf(p);
    num / den
}

/// Grid search over (x, up, down) with golden refinement in x.
pub fn tightness_search<T: Real>(p: T, grid_resolution: usize) -> Result<TightnessResult<T>> {
    if !(p > T::one() && p <= T::of(2.0)) {
        return Err(Error::domain(format!(
            "tightness search needs p in (1, 2], got {p}"
        )));
    }
    if grid_resolution < 8 {
        return Err(Error::domain("grid resolution too small"));
    }
    let sharp = best_vbe_constant(p)?.value;

    let mut xs: Vec<T> = linear_grid_open(T::zero(), T::one(), grid_resolution);
    xs.extend(log_grid(T::of(1e-6), T::of(0.2), grid_resolution / 4));
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let ups = log_grid(T::of(1e-10), T::of(0.3), 24);
    let mut downs: Vec<T> = (0..=24)
        .map(|i| T::of(0.4) + T::of_usize(i) * T::of(0.05))
        .collect();
    downs.push(T::one());

    let mut best = TightnessResult {
        best_ratio: T::neg_infinity(),
        witness: TwoStepWitness {
            x1: T::zero(),
            up: T::zero(),
            down: T::zero(),
            up_prob: T::zero(),
        },
        sharp_constant: sharp,
        attainment: T::zero(),
    };
    for &x in &xs {
        for &up in &ups {
            for &down in &downs {
                let r = two_step_ratio(p, x, up, down);
                if r > best.best_ratio {
                    best.best_ratio = r;
                    best.witness = TwoStepWitness {
                        x1: x,
                        up,
                        down,
                        up_prob: down / (up + down),
                    };
                }
            }
        }
    }
    // refine x with the best (up, down) frozen
    let w = best.witness;
    let refined = golden_max(
        |x| two_step_ratio(p, x, w.up, w.down),
        (w.x1 - T::of(0.05)).max(T::of(1e-9)),
        (w.x1 + T::of(0.05)).min(T::one() - T::of(1e-9)),
        T::of(1e-12),
        200,
    );
    if refined.value > best.best_ratio {
        best.best_ratio = refined.value;
        best.witness.x1 = refined.x;
        best.witness.up_prob = w.down / (w.up + w.down);
    }
    best.attainment = best.best_ratio / sharp;
    Ok(best)
}
