//! The numeric core is generic over the scalar; exercise the f32 path at
//! f32-appropriate tolerances.

use moment_ineq::constants::{best_vbe_constant, pairwise_k2};
use moment_ineq::kernels::{cos_remainder, sphere_pth_moment, MomentOrder};
use moment_ineq::quadrature::{kernel_remainder_integral, QuadratureConfig};

#[test]
fn f32_kernels_and_constants() {
    let c: f32 = cos_remainder(1, 0.25f32).unwrap();
    let want = 0.25f32.powi(4) / 24.0 - 0.25f32.powi(6) / 720.0;
    assert!((c - want).abs() < 1e-4 * want, "c_1(0.25) = {c} want {want}");

    let m: f32 = sphere_pth_moment(3, 2.0f32).unwrap();
    assert!((m - 1.0 / 3.0).abs() < 1e-4);

    let cp = best_vbe_constant(1.5f32).unwrap();
    assert!((cp.value - 1.30656).abs() < 1e-3, "C_1.5 = {}", cp.value);

    assert!((pairwise_k2(1.5f32).unwrap() - 24.0).abs() < 1e-3);
}

#[test]
fn f32_radial_quadrature() {
    let p = MomentOrder::non_even(1.0f32).unwrap();
    let mut cfg = QuadratureConfig::<f32>::closed_form();
    cfg.abs_tol = 1e-6;
    cfg.rel_tol = 1e-4;
    let r = kernel_remainder_integral(&p, 1.0f32, &cfg).unwrap();
    let want = -std::f32::consts::PI / 2.0;
    assert!((r.value - want).abs() < 2e-3, "got {}", r.value);
}
