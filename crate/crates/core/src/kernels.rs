//! Trigonometric Taylor-remainder kernels and closed-form sphere quantities.
//!
//! The remainder kernels are
//!
//! ```text
//! c_k(z) = cos z - sum_{j=0..k} (-1)^j z^{2j} / (2j)!
//! s_k(z) = sin z - sum_{j=0..k} (-1)^j z^{2j+1} / (2j+1)!
//! ```
//!
//! Subtracting the polynomial from cos/sin directly loses roughly
//! |z|^(2k+2) digits near the origin, so below a switch threshold both are
//! evaluated as the convergent Taylor tail instead.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::special::ln_gamma;

/// Exponent p with its derived kernel order floor(p/2) and parity class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentOrder<T> {
    p: T,
    kernel_order: usize,
    even_integer: bool,
}

impl<T: Real> MomentOrder<T> {
    /// Any positive exponent.
    pub fn new(p: T) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::NonFinite("p"));
        }
        if p <= T::zero() {
            return Err(Error::domain(format!(
                "moment order p must be positive, got {p}"
            )));
        }
        let half = p / T::of(2.0);
        let kernel_order = half.floor().to_usize().ok_or(Error::NonFinite("p"))?;
        let even_integer = half.fract() == T::zero();
        Ok(MomentOrder {
            p,
            kernel_order,
            even_integer,
        })
    }

    /// Positive exponent that is not an even integer; required wherever the
    /// kernel constant K_p appears (sin(pi p / 2) vanishes at even integers).
    pub fn non_even(p: T) -> Result<Self> {
        let order = Self::new(p)?;
        if order.even_integer {
            return Err(Error::domain(format!("p = {p} is an even integer")));
        }
        debug_assert!(
            T::of_usize(2 * order.kernel_order) < p && p < T::of_usize(2 * order.kernel_order + 2)
        );
        Ok(order)
    }

    pub fn p(&self) -> T {
        self.p
    }

    /// floor(p / 2); the order of the remainder kernel c_m the exponent pairs with.
    pub fn kernel_order(&self) -> usize {
        self.kernel_order
    }

    pub fn is_even_integer(&self) -> bool {
        self.even_integer
    }
}

fn check_finite<T: Real>(z: T) -> Result<()> {
    if z.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite("z"))
    }
}

#[inline]
fn switch_threshold<T: Real>(k: usize) -> T {
    T::one().max(T::of_usize(2 * k))
}

/// Degree-2k cosine Taylor polynomial, sum_{j=0..k} (-1)^j z^{2j} / (2j)!.
fn cos_poly<T: Real>(k: usize, z: T) -> T {
    let z2 = z * z;
    let mut term = T::one();
    let mut sum = term;
    for j in 1..=k {
        term = -term * z2 / T::of_usize((2 * j - 1) * (2 * j));
        sum += term;
    }
    sum
}

fn sin_poly<T: Real>(k: usize, z: T) -> T {
    let z2 = z * z;
    let mut term = z;
    let mut sum = term;
    for j in 1..=k {
        term = -term * z2 / T::of_usize((2 * j) * (2 * j + 1));
        sum += term;
    }
    sum
}

/// Taylor tail sum_{j >= k+1} (-1)^j z^{2j} / (2j)!; converges for any z,
/// summed until terms fall below 1e-18 of the partial sum.
fn cos_tail<T: Real>(k: usize, z: T) -> T {
    let z2 = z * z;
    let mut term = T::one();
    for j in 1..=(k + 1) {
        term = -term * z2 / T::of_usize((2 * j - 1) * (2 * j));
    }
    let mut sum = term;
    let cut = T::of(1e-18);
    for j in (k + 2)..(k + 2 + 300) {
        term = -term * z2 / T::of_usize((2 * j - 1) * (2 * j));
        sum += term;
        if term.abs() <= cut * sum.abs() {
            break;
        }
    }
    sum
}

fn sin_tail<T: Real>(k: usize, z: T) -> T {
    let z2 = z * z;
    let mut term = z;
    for j in 1..=(k + 1) {
        term = -term * z2 / T::of_usize((2 * j) * (2 * j + 1));
    }
    let mut sum = term;
    let cut = T::of(1e-18);
    for j in (k + 2)..(k + 2 + 300) {
        term = -term * z2 / T::of_usize((2 * j) * (2 * j + 1));
        sum += term;
        if term.abs() <= cut * sum.abs() {
            break;
        }
    }
    sum
}

/// c_k(z) = cos z minus its degree-2k Taylor polynomial.
///
/// Satisfies (-1)^k c_k(z) <= 0 for all real z.
pub fn cos_remainder<T: Real>(k: usize, z: T) -> Result<T> {
    check_finite(z)?;
    if z.abs() <= switch_threshold::<T>(k) {
        Ok(cos_tail(k, z))
    } else {
        Ok(z.cos() - cos_poly(k, z))
    }
}

/// s_k(z) = sin z minus its degree-(2k+1) Taylor polynomial.
///
/// Satisfies (-1)^k z s_k(z) <= 0 for all real z.
pub fn sin_remainder<T: Real>(k: usize, z: T) -> Result<T> {
    check_finite(z)?;
    if z.abs() <= switch_threshold::<T>(k) {
        Ok(sin_tail(k, z))
    } else {
        Ok(z.sin() - sin_poly(k, z))
    }
}

/// pth absolute moment of one coordinate of a uniform point on the unit
/// sphere of R^d:
///
/// ```text
/// E |w . e_1|^p = Gamma(d/2) Gamma((p+1)/2) / (sqrt(pi) Gamma((p+d)/2))
/// ```
///
/// ((w . e_1)^2 is Beta(1/2, (d-1)/2) distributed.) This is also the
/// normalizing constant c_{p, mu} of the sphere-mixture identity for mu the
/// uniform distribution on the sphere.
pub fn sphere_pth_moment<T: Real>(d: usize, p: T) -> Result<T> {
    if d == 0 {
        return Err(Error::domain("dimension d must be at least 1"));
    }
    if !p.is_finite() {
        return Err(Error::NonFinite("p"));
    }
    if p <= T::zero() {
        return Err(Error::domain(format!(
            "exponent p must be positive, got {p}"
        )));
    }
    if d == 1 {
        return Ok(T::one());
    }
    let half = T::of(0.5);
    let df = T::of_usize(d);
    let ln = ln_gamma(df * half) + ln_gamma((p + T::one()) * half)
        - ln_gamma((p + df) * half)
        - T::PI().ln() * half;
    Ok(ln.exp())
}

/// Surface area of the unit sphere, in both circulating conventions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceArea<T> {
    /// Area of S^{d-1}, the unit sphere of R^d: 2 pi^{d/2} / Gamma(d/2).
    /// Downstream constants use this value.
    pub canonical: T,
    /// 2 pi^{(d+1)/2} / Gamma((d+1)/2), the area of S^d in R^{d+1}; some
    /// sources quote this expression for S^{d-1}. Kept for comparison; the
    /// radial-constant oracle arbitrates between the two.
    pub alt_convention: T,
}

/// Surface area of the unit sphere of R^d.
pub fn sphere_surface_area<T: Real>(d: usize) -> Result<SurfaceArea<T>> {
    if d == 0 {
        return Err(Error::domain("dimension d must be at least 1"));
    }
    let half = T::of(0.5);
    let area = |dim: T| -> T {
        (T::of(2.0).ln() + dim * half * T::PI().ln() - ln_gamma(dim * half)).exp()
    };
    let df = T::of_usize(d);
    Ok(SurfaceArea {
        canonical: area(df),
        alt_convention: area(df + T::one()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Independent Taylor-tail oracle: plain term-by-term sum, no switching.
    fn tail_oracle(k: usize, z: f64, sine: bool) -> f64 {
        let mut sum = 0.0;
        for j in (k + 1)..(k + 60) {
            let exp = if sine { 2 * j + 1 } else { 2 * j };
            let mut term = if j % 2 == 0 { 1.0 } else { -1.0 };
            for i in 1..=exp {
                term *= z / i as f64;
            }
            sum += term;
        }
        sum
    }

    #[test]
    fn cos_remainder_fixed_points() {
        assert_eq!(cos_remainder(0, 0.0).unwrap(), 0.0);
        assert!((cos_remainder(0, PI).unwrap() - (-2.0)).abs() < 1e-15);
        // c_1(0.01) ~ 0.01^4 / 24, from the tail oracle.
        let want = tail_oracle(1, 0.01, false);
        let got = cos_remainder(1, 0.01).unwrap();
        assert!(
            ((got - want) / want).abs() < 1e-12,
            "got {got:e} want {want:e}"
        );
        assert!((want - 4.1666e-10).abs() < 1e-13);
    }

    #[test]
    fn sin_remainder_fixed_points() {
        assert_eq!(sin_remainder(0, 0.0).unwrap(), 0.0);
        assert!((sin_remainder(0, PI).unwrap() - (-PI)).abs() < 1e-15);
        let want = tail_oracle(1, 0.01, true);
        let got = sin_remainder(1, 0.01).unwrap();
        assert!(((got - want) / want).abs() < 1e-12);
        assert!((want - 8.3333e-13).abs() < 1e-16);
    }

    #[test]
    fn remainders_match_direct_subtraction_at_moderate_arguments() {
        // Around the switch point both evaluation routes are stable and must
        // agree. (The plain tail oracle loses digits like eps * e^z, so the
        // sweep stays below z = 14.)
        for k in 0..=6usize {
            let switch = 1f64.max(2.0 * k as f64);
            let mut z = switch + 0.25;
            while z < (switch + 4.0).min(14.0) {
                let tail = tail_oracle(k, z, false);
                let direct = cos_remainder(k, z).unwrap();
                let scale = direct.abs().max(1e-3);
                assert!(
                    ((tail - direct) / scale).abs() < 1e-8,
                    "k={k} z={z} tail={tail:e} direct={direct:e}"
                );
                z += 0.5;
            }
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(cos_remainder(0, f64::NAN).is_err());
        assert!(sin_remainder(2, f64::INFINITY).is_err());
    }

    #[test]
    fn moment_order_classification() {
        let even = MomentOrder::new(4.0f64).unwrap();
        assert!(even.is_even_integer());
        assert_eq!(even.kernel_order(), 2);
        assert!(MomentOrder::non_even(2.0f64).is_err());
        let odd = MomentOrder::non_even(3.0f64).unwrap();
        assert!(!odd.is_even_integer());
        assert_eq!(odd.kernel_order(), 1);
        let frac = MomentOrder::non_even(1.3f64).unwrap();
        assert_eq!(frac.kernel_order(), 0);
        assert!(MomentOrder::new(0.0f64).is_err());
        assert!(MomentOrder::new(-1.0f64).is_err());
    }

    #[test]
    fn sphere_moment_closed_forms() {
        // d = 1: |w . e1| = 1 for any p.
        for p in [0.5f64, 1.0, 2.7] {
            assert!((sphere_pth_moment(1, p).unwrap() - 1.0).abs() < 1e-15);
        }
        // d = 2, p = 1: 2 / pi.
        assert!((sphere_pth_moment(2, 1.0f64).unwrap() - 2.0 / PI).abs() < 1e-14);
        // d = 3, p = 1: 1 / 2.
        assert!((sphere_pth_moment(3, 1.0f64).unwrap() - 0.5).abs() < 1e-14);
        // Second moment of one coordinate is 1/d.
        for d in 1..60usize {
            let got = sphere_pth_moment(d, 2.0f64).unwrap();
            let want = 1.0 / d as f64;
            assert!(((got - want) / want).abs() < 1e-12, "d={d}");
        }
        assert!(sphere_pth_moment(0, 1.0f64).is_err());
        assert!(sphere_pth_moment(2, 0.0f64).is_err());
    }

    #[test]
    fn surface_areas() {
        let a2 = sphere_surface_area::<f64>(2).unwrap();
        assert!((a2.canonical - 2.0 * PI).abs() < 1e-13);
        assert!((a2.alt_convention - 4.0 * PI).abs() < 1e-13);
        let a3 = sphere_surface_area::<f64>(3).unwrap();
        assert!((a3.canonical - 4.0 * PI).abs() < 1e-13);
        // In one dimension the "sphere" is two points.
        let a1 = sphere_surface_area::<f64>(1).unwrap();
        assert!((a1.canonical - 2.0).abs() < 1e-14);
        assert!((a1.alt_convention - 2.0 * PI).abs() < 1e-13);
        assert!(sphere_surface_area::<f64>(0).is_err());
    }

    #[test]
    fn large_dimension_does_not_overflow() {
        let v = sphere_pth_moment(2000, 1.7f64).unwrap();
        assert!(v.is_finite() && v > 0.0);
        let a = sphere_surface_area::<f64>(400).unwrap();
        assert!(a.canonical.is_finite());
    }
}
