//! Tail handling for semi-infinite oscillatory integrands.
//!
//! Beyond the truncation radius the integrands here are either
//!   * trigonometric times a power, integrated exactly by iterated
//!     integration by parts with a certified remainder bound,
//!   * sign-alternating on half-period segments, summed with repeated
//!     averaging of partial sums, or
//!   * only boundable, in which case the envelope bound is reported.

use crate::real::Real;

use super::gauss::GaussLegendre;

/// One closed-form radial term w * exp(-q r^2) * cos(b r).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosGaussTerm<T> {
    pub weight: T,
    pub gauss: T,
    pub freq: T,
}

/// Monotone magnitude bound coef * r^(-power) * exp(-gauss r^2), valid for
/// r at and beyond the truncation radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayEnvelope<T> {
    pub coef: T,
    pub power: T,
    pub gauss: T,
}

impl<T: Real> DecayEnvelope<T> {
    pub fn unit() -> Self {
        DecayEnvelope {
            coef: T::one(),
            power: T::zero(),
            gauss: T::zero(),
        }
    }

    pub fn gaussian(coef: T, gauss: T) -> Self {
        DecayEnvelope {
            coef,
            power: T::zero(),
            gauss,
        }
    }

    pub fn power(coef: T, power: T) -> Self {
        DecayEnvelope {
            coef,
            power,
            gauss: T::zero(),
        }
    }

    /// Envelope of a product of bounded factors.
    pub fn product(self, other: Self) -> Self {
        DecayEnvelope {
            coef: self.coef * other.coef,
            power: self.power + other.power,
            gauss: self.gauss + other.gauss,
        }
    }

    /// Envelope of a convex (or any nonnegative-weight) combination.
    pub fn mixture(parts: &[(T, Self)]) -> Self {
        let coef = parts
            .iter()
            .fold(T::zero(), |acc, (w, e)| acc + w.abs() * e.coef);
        let power = parts
            .iter()
            .map(|(_, e)| e.power)
            .fold(T::infinity(), |a, b| a.min(b));
        let gauss = parts
            .iter()
            .map(|(_, e)| e.gauss)
            .fold(T::infinity(), |a, b| a.min(b));
        DecayEnvelope { coef, power, gauss }
    }

    pub fn eval(&self, r: T) -> T {
        self.coef * r.powf(-self.power) * (-self.gauss * r * r).exp()
    }

    /// Bound on | integral_T^inf envelope(r) r^{-(p+1)} dr |.
    pub fn tail_bound(&self, cutoff: T, p: T) -> T {
        let exponent = p + self.power;
        self.coef * (-self.gauss * cutoff * cutoff).exp() * cutoff.powf(-exponent) / exponent
    }
}

/// How the oscillatory factor Re f(r) behaves past the truncation radius.
#[derive(Debug, Clone)]
pub enum TailSpec<T> {
    /// Re f(r) = sum_i w_i exp(-q_i r^2) cos(b_i r) exactly; the undamped
    /// cosines get the integration-by-parts tail, the damped ones a
    /// Gaussian truncation bound.
    CosineGauss(Vec<CosGaussTerm<T>>),
    /// Sign-alternating with roughly this half-period (Bessel-type
    /// profiles); summed segment-by-segment with averaging acceleration.
    Oscillatory {
        half_period: T,
        envelope: DecayEnvelope<T>,
    },
    /// Only |Re f(r)| <= envelope(r) is known; the tail is dropped and the
    /// envelope bound reported as error.
    BoundOnly { envelope: DecayEnvelope<T> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trig {
    Cos,
    Sin,
}

/// integral_T^inf trig(b r) r^{-(p+1)} dr by iterated integration by parts.
///
/// Each step is an exact identity; the iteration stops at the minimal
/// remainder bound, which shrinks geometrically while (p + n) < b T. Returns
/// (value, remainder bound). Callers should ensure b T >~ 40 for full f64
/// accuracy; the bound stays honest regardless.
pub fn trig_power_tail<T: Real>(trig: Trig, b: T, p: T, cutoff: T, tol: T) -> (T, T) {
    debug_assert!(b > T::zero() && cutoff > T::zero() && p > T::zero());
    let bt = b * cutoff;
    let (s, c) = (bt.sin(), bt.cos());

    let mut state = trig;
    let mut coef = T::one();
    let mut n = T::zero();
    let mut value = T::zero();
    let mut best_value = T::zero();
    let mut best_bound = T::infinity();
    let mut max_term = T::zero();
    let mut steps = 0usize;

    for _ in 0..64 {
        steps += 1;
        let exponent = p + T::one() + n; // integrand is r^{-exponent} * trig
        let boundary_scale = cutoff.powf(-exponent) / b;
        let boundary = match state {
            Trig::Cos => -s * boundary_scale,
            Trig::Sin => c * boundary_scale,
        };
        let term = coef * boundary;
        value += term;
        max_term = max_term.max(term.abs());

        let next_coef = match state {
            Trig::Cos => coef * exponent / b,
            Trig::Sin => -coef * exponent / b,
        };
        // |remaining integral| <= T^{-(p+n+1)} / (p+n+1)
        let rem = next_coef.abs() * cutoff.powf(-(exponent)) / exponent;
        if rem < best_bound {
            best_bound = rem;
            best_value = value;
            if rem <= tol {
                break;
            }
        } else {
            // past the sweet spot of the expansion
            break;
        }
        coef = next_coef;
        n += T::one();
        state = match state {
            Trig::Cos => Trig::Sin,
            Trig::Sin => Trig::Cos,
        };
    }
    // account for the roundoff of summing the boundary terms
    best_bound += T::epsilon() * T::of_usize(4 + steps) * max_term.max(best_value.abs());
    (best_value, best_bound)
}

/// integral_T^inf r^{e-p-1} dr = T^{e-p} / (p - e), for e < p.
pub fn power_tail<T: Real>(exponent: T, p: T, cutoff: T) -> T {
    debug_assert!(exponent < p);
    cutoff.powf(exponent - p) / (p - exponent)
}

/// Sum integral_{start}^inf f by segments of length `seg_len` whose values
/// alternate in sign, with repeated averaging of the partial sums.
/// Returns (value, bound, evaluations).
pub fn alternating_segment_tail<T: Real, F: FnMut(T) -> T>(
    f: &mut F,
    start: T,
    seg_len: T,
    rule: &GaussLegendre<T>,
    max_segments: usize,
    tol: T,
) -> (T, T, usize) {
    let mut partials = Vec::with_capacity(max_segments);
    let mut acc = T::zero();
    let mut evals = 0;
    let mut last_seg = T::zero();
    for k in 0..max_segments {
        let a = start + seg_len * T::of_usize(k);
        let b = a + seg_len;
        let s = rule.integrate(&mut *f, a, b);
        evals += rule.nodes.len();
        acc += s;
        partials.push(acc);
        last_seg = s.abs();
        if last_seg <= tol * T::of(0.1) && k >= 3 {
            break;
        }
    }
    if partials.len() == 1 {
        return (partials[0], last_seg, evals);
    }
    // Repeated averaging (van Wijngaarden); final single element is the
    // estimate, agreement of the last two depths the error gauge.
    let mut row = partials;
    let mut prev_front = row[row.len() - 1];
    let mut front = prev_front;
    while row.len() > 1 {
        prev_front = front;
        let next: Vec<T> = row.windows(2).map(|w| T::of(0.5) * (w[0] + w[1])).collect();
        front = next[next.len() - 1];
        row = next;
    }
    let bound = (front - prev_front).abs() + last_seg.abs() * T::of(0.5).powi(16);
    (front, bound, evals)
}
