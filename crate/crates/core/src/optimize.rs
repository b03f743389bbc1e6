//! Bracketed one-dimensional optimization: dense grid scan followed by
//! golden-section refinement inside the best bracketing cell.
//!
//! The objectives here are cheap and not proved unimodal, so scanning the
//! whole grid before refining guards against secondary local maxima.

use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum<T> {
    pub x: T,
    pub value: T,
}

const INV_GOLDEN: f64 = 0.381_966_011_250_105_1; // 2 - phi

/// Golden-section maximization on [a, b]; stops when the bracket is below `xtol`.
pub fn golden_max<T: Real, F: Fn(T) -> T>(
    f: F,
    mut a: T,
    mut b: T,
    xtol: T,
    max_iter: usize,
) -> Extremum<T> {
    let r = T::of(INV_GOLDEN);
    let mut x1 = a + r * (b - a);
    let mut x2 = b - r * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iter = 0;
    while (b - a).abs() > xtol && iter < max_iter {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - r * (b - a);
            f2 = f(x2);
        }
        iter += 1;
    }
    if f1 > f2 {
        Extremum { x: x1, value: f1 }
    } else {
        Extremum { x: x2, value: f2 }
    }
}

/// Scan `grid` (assumed sorted ascending), then refine around the best point
/// within its neighboring cells.
pub fn grid_then_golden_max<T: Real, F: Fn(T) -> T>(
    f: F,
    grid: &[T],
    xtol: T,
    max_iter: usize,
) -> Extremum<T> {
    assert!(grid.len() >= 2, "need at least two grid points");
    let mut best_i = 0;
    let mut best_v = f(grid[0]);
    for (i, &x) in grid.iter().enumerate().skip(1) {
        let v = f(x);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let lo = grid[best_i.saturating_sub(1)];
    let hi = grid[(best_i + 1).min(grid.len() - 1)];
    let refined = golden_max(&f, lo, hi, xtol, max_iter);
    if refined.value > best_v {
        refined
    } else {
        Extremum {
            x: grid[best_i],
            value: best_v,
        }
    }
}

pub fn grid_then_golden_min<T: Real, F: Fn(T) -> T>(
    f: F,
    grid: &[T],
    xtol: T,
    max_iter: usize,
) -> Extremum<T> {
    let flipped = grid_then_golden_max(|x| -f(x), grid, xtol, max_iter);
    Extremum {
        x: flipped.x,
        value: -flipped.value,
    }
}

/// `n` points spaced evenly on the open interval (a, b).
pub fn linear_grid_open<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    let step = (b - a) / T::of_usize(n + 1);
    (1..=n).map(|i| a + step * T::of_usize(i)).collect()
}

/// `n` points log-spaced on [a, b], a > 0.
pub fn log_grid<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    assert!(a > T::zero() && b > a);
    let (la, lb) = (a.ln(), b.ln());
    let step = (lb - la) / T::of_usize(n - 1);
    (0..n).map(|i| (la + step * T::of_usize(i)).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_peak() {
        let f = |x: f64| -(x - 0.37).powi(2);
        let grid: Vec<f64> = (0..1000).map(|i| i as f64 / 1000.0).collect();
        let ext = grid_then_golden_max(f, &grid, 1e-12, 200);
        assert!((ext.x - 0.37).abs() < 1e-7);
        assert!(ext.value.abs() < 1e-13);
    }

    #[test]
    fn multimodal_picks_global() {
        // Local max near 0.15, global near 0.8.
        let f = |x: f64| {
            (-((x - 0.15) / 0.05).powi(2)).exp() + 2.0 * (-((x - 0.8) / 0.05).powi(2)).exp()
        };
        let grid: Vec<f64> = (0..2000).map(|i| i as f64 / 2000.0).collect();
        let ext = grid_then_golden_max(f, &grid, 1e-10, 200);
        assert!((ext.x - 0.8).abs() < 1e-6);
    }

    #[test]
    fn min_wrapper() {
        let grid: Vec<f64> = (0..500).map(|i| -1.0 + i as f64 / 250.0).collect();
        let ext = grid_then_golden_min(|x: f64| (x - 0.2).abs() + 1.0, &grid, 1e-10, 200);
        assert!((ext.x - 0.2).abs() < 1e-6);
        assert!((ext.value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn grids() {
        let g = linear_grid_open(0.0f64, 1.0, 9);
        assert_eq!(g.len(), 9);
        assert!((g[0] - 0.1).abs() < 1e-12 && (g[8] - 0.9).abs() < 1e-12);
        let lg = log_grid(1e-3f64, 1e3, 7);
        assert_eq!(lg.len(), 7);
        assert!((lg[0] - 1e-3).abs() < 1e-12 && (lg[6] - 1e3).abs() < 1e-9);
    }
}
