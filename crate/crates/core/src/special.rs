//! Gamma-function helpers.
//!
//! Lanczos approximation (g = 7, 9 terms, the GSL/Wikipedia coefficient set),
//! evaluated in log space so that quantities like Gamma((p + d) / 2) stay
//! representable for large dimension.

use crate::real::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of Gamma(x) for x > 0.
pub fn ln_gamma<T: Real>(x: T) -> T {
    debug_assert!(x > T::zero(), "ln_gamma needs a positive argument, got {x}");
    if x < T::of(0.5) {
        // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x).
        let pi = T::PI();
        return (pi / (pi * x).sin()).ln() - ln_gamma(T::one() - x);
    }
    let z = x - T::one();
    let mut t = T::of(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        t += T::of(c) / (z + T::of_usize(i));
    }
    let w = z + T::of(LANCZOS_G) + T::of(0.5);
    let half_ln_two_pi = T::of(0.918_938_533_204_672_74); // ln(2 pi) / 2
    half_ln_two_pi + (z + T::of(0.5)) * w.ln() - w + t.ln()
}

/// Gamma(x) for x > 0.
pub fn gamma<T: Real>(x: T) -> T {
    ln_gamma(x).exp()
}
