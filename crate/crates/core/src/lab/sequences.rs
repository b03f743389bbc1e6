//! Generators for the random sequences the inequality checks consume.
//!
//! A v-martingale here is a sequence (S_j) with E(X_j | S_{j-1}) = 0 for
//! j >= 2, X_j = S_j - S_{j-1}; conditioning is on the previous partial sum
//! only, which is strictly weaker than the martingale property. X_1 is
//! unrestricted.

use crate::cf_moments::RandomVectorModel;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::rng::CounterRng;

/// Law of the unrestricted first increment.
#[derive(Debug, Clone)]
pub enum FirstStepLaw<T> {
    Deterministic(Vec<T>),
    GaussianShifted { mean: Vec<T>, sigma: T },
    SymmetricTwoPoint(Vec<T>),
}

/// Conditional step laws; every one of them has zero mean given the current
/// partial sum, and all but `SkewTwoPointAxis` are conditionally symmetric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepLaw<T> {
    /// Independent standard normal coordinates.
    GaussianIso,
    /// +-e_k with equal probability.
    RademacherAxis(usize),
    /// Uniform random direction on the sphere.
    RandomDirection,
    /// +- the direction of the current partial sum (e_1 at the origin):
    /// the conditional law genuinely depends on S_{j-1}.
    SignedSumDirection,
    /// Zero-mean two-point step along e_k: up with probability
    /// down/(up+down), -down otherwise. Asymmetric unless up == down.
    SkewTwoPointAxis { axis: usize, up: T, down: T },
}

impl<T: Real> StepLaw<T> {
    pub fn is_symmetric(&self) -> bool {
        match self {
            StepLaw::SkewTwoPointAxis { up, down, .. } => up == down,
            _ => true,
        }
    }

    fn draw(&self, rng: &mut CounterRng, sum: &[T], out: &mut [T]) {
        let d = out.len();
        match *self {
            StepLaw::GaussianIso => rng.fill_normal(out),
            StepLaw::RademacherAxis(k) => {
                let s: T = rng.rademacher();
                for v in out.iter_mut() {
                    *v = T::zero();
                }
                out[k.min(d - 1)] = s;
            }
            StepLaw::RandomDirection => rng.unit_vector(out),
            StepLaw::SignedSumDirection => {
                let nrm = sum.iter().fold(T::zero(), |a, &v| a + v * v).sqrt();
                let s: T = rng.rademacher();
                if nrm > T::of(1e-12) {
                    for (v, &si) in out.iter_mut().zip(sum) {
                        *v = s * si / nrm;
                    }
                } else {
                    for v in out.iter_mut() {
                        *v = T::zero();
                    }
                    out[0] = s;
                }
            }
            StepLaw::SkewTwoPointAxis { axis, up, down } => {
                let q = down / (up + down);
                let u: T = rng.uniform();
                let v = if u < q { up } else { -down };
                for w in out.iter_mut() {
                    *w = T::zero();
                }
                out[axis.min(d - 1)] = v;
            }
        }
    }
}

/// Volatility sigma_j(S_{j-1}) scaling the conditional step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Volatility<T> {
    Constant(T),
    /// base + slope * min(|S|, cap)
    NormAffine {
        base: T,
        slope: T,
        cap: T,
    },
    /// base + amp * exp(-(|S| / scale)^2)
    Bump {
        base: T,
        amp: T,
        scale: T,
    },
}

impl<T: Real> Volatility<T> {
    fn eval(&self, sum_norm: T) -> T {
        match *self {
            Volatility::Constant(c) => c,
            Volatility::NormAffine { base, slope, cap } => base + slope * sum_norm.min(cap),
            Volatility::Bump { base, amp, scale } => {
                let z = sum_norm / scale;
                base + amp * (-z * z).exp()
            }
        }
    }
}

/// Kinds of generated sequences.
#[derive(Debug, Clone)]
pub enum SequenceKind<T> {
    /// General v-martingale differences. With `virtual_only`, step 3 is a
    /// documented example that is a v-martingale difference but not a
    /// martingale difference: it reuses X_1's sign whenever S_2 lands at 0,
    /// so E(X_3 | X_1, X_2) != 0 while E(X_3 | S_2) = 0 exactly.
    VMartingale {
        first: FirstStepLaw<T>,
        volatility: Volatility<T>,
        step: StepLaw<T>,
        virtual_only: bool,
    },
    /// v-martingale whose conditional step laws are symmetric.
    SymmetricVMartingale {
        first: FirstStepLaw<T>,
        volatility: Volatility<T>,
        step: StepLaw<T>,
    },
    /// Two independent copies of a model (for the iid-difference template).
    IidPair { model: RandomVectorModel<T> },
    /// Subset-parity construction: `sign_bits` independent signs generate up
    /// to 2^k - 1 pairwise-independent signs (one per nonempty subset), each
    /// scaled by a fixed direction and an independent magnitude. Pairwise
    /// independence and zero mean are exact; joint independence fails for
    /// n >= 3 (the product over a subset triple {A, B, A xor B} is +1).
    PairwiseIndependent {
        sign_bits: usize,
        directions: Vec<Vec<T>>,
        magnitude: SequenceMagnitude<T>,
    },
    /// X_1 Gaussian with a mean shift, X_2.. independent centered Gaussians;
    /// independence makes this a v-martingale too.
    IndependentMeanShifted { first_mean: Vec<T>, sigma: T },
}

/// Magnitude law for pairwise-independent summands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SequenceMagnitude<T> {
    Unit,
    Uniform { lo: T, hi: T },
    HalfNormal { sigma: T },
}

impl<T: Real> SequenceMagnitude<T> {
    fn draw(&self, rng: &mut CounterRng) -> T {
        match *self {
            SequenceMagnitude::Unit => T::one(),
            SequenceMagnitude::Uniform { lo, hi } => rng.uniform_in(lo, hi),
            SequenceMagnitude::HalfNormal { sigma } => {
                let z: T = rng.normal();
                sigma * z.abs()
            }
        }
    }
}

/// Description of a generator for sequences of increments.
#[derive(Debug, Clone)]
pub struct SequenceSpec<T> {
    pub kind: SequenceKind<T>,
    pub dim: usize,
    pub len: usize,
    pub seed: u64,
}

impl<T: Real> SequenceSpec<T> {
    pub fn validate(&self) -> Result<()> {
        crate::d_validate(self.dim)?;
        if self.len == 0 {
            return Err(Error::domain("sequence length must be at least 1"));
        }
        match &self.kind {
            SequenceKind::VMartingale {
                first,
                virtual_only,
                ..
            } => {
                first_len_check(first, self.dim)?;
                if *virtual_only && self.len < 3 {
                    return Err(Error::domain("the virtual-only twist needs length >= 3"));
                }
            }
            SequenceKind::SymmetricVMartingale { first, step, .. } => {
                first_len_check(first, self.dim)?;
                if !step.is_symmetric() {
                    return Err(Error::domain(
                        "symmetric v-martingale needs a symmetric step law",
                    ));
                }
                if !first_is_symmetric(first) {
                    return Err(Error::domain(
                        "symmetric v-martingale needs a symmetric first step",
                    ));
                }
            }
            SequenceKind::IidPair { model } => {
                if model.dim() != self.dim {
                    return Err(Error::domain("iid pair model dimension mismatch"));
                }
                if self.len != 2 {
                    return Err(Error::domain("iid pair has length 2"));
                }
            }
            SequenceKind::PairwiseIndependent {
                sign_bits,
                directions,
                ..
            } => {
                let max_n = (1usize << sign_bits) - 1;
                if self.len > max_n {
                    return Err(Error::domain(format!(
                        "{} sign bits support at most {max_n} pairwise-independent summands",
                        sign_bits
                    )));
                }
                if directions.len() < self.len {
                    return Err(Error::domain("need one direction per summand"));
                }
                if directions.iter().any(|v| v.len() != self.dim) {
                    return Err(Error::domain("direction dimension mismatch"));
                }
            }
            SequenceKind::IndependentMeanShifted { first_mean, .. } => {
                if first_mean.len() != self.dim {
                    return Err(Error::domain("first mean dimension mismatch"));
                }
            }
        }
        Ok(())
    }

    /// Generate the increments X_1..X_n of one path.
    pub fn sample_increments(&self, path: u64, out: &mut Vec<Vec<T>>) {
        let d = self.dim;
        let n = self.len;
        out.clear();
        out.resize(n, vec![T::zero(); d]);
        let mut rng = CounterRng::new(self.seed, path);
        match &self.kind {
            SequenceKind::VMartingale {
                first,
                volatility,
                step,
                virtual_only,
            } => {
                if *virtual_only {
                    self.sample_virtual_only(&mut rng, out);
                } else {
                    sample_v_martingale(&mut rng, first, volatility, step, out);
                }
            }
            SequenceKind::SymmetricVMartingale {
                first,
                volatility,
                step,
            } => {
                sample_v_martingale(&mut rng, first, volatility, step, out);
            }
            SequenceKind::IidPair { model } => {
                model.sample_into(&mut rng, &mut out[0]);
                model.sample_into(&mut rng, &mut out[1]);
            }
            SequenceKind::PairwiseIndependent {
                sign_bits,
                directions,
                magnitude,
            } => {
                let mut bits: u32 = 0;
                for b in 0..*sign_bits {
                    if rng.random_bit() {
                        bits |= 1 << b;
                    }
                }
                for (j, x) in out.iter_mut().enumerate() {
                    // subset j+1: parity of the selected bits
                    let mask = (j + 1) as u32;
                    let parity = (bits & mask).count_ones() % 2;
                    let sign = if parity == 0 { T::one() } else { -T::one() };
                    let mag = magnitude.draw(&mut rng);
                    for (v, &dir) in x.iter_mut().zip(&directions[j]) {
                        *v = sign * mag * dir;
                    }
                }
            }
            SequenceKind::IndependentMeanShifted { first_mean, sigma } => {
                for (j, x) in out.iter_mut().enumerate() {
                    for (i, v) in x.iter_mut().enumerate() {
                        let z: T = rng.normal();
                        *v = *sigma * z + if j == 0 { first_mean[i] } else { T::zero() };
                    }
                }
            }
        }
    }

    /// First two steps are +-e_1 coins; X_3 copies X_1's sign with a fixed
    /// scale whenever S_2 = 0 (so the sequence is not a martingale difference
    /// sequence), and later steps follow a plain Rademacher walk.
    fn sample_virtual_only(&self, rng: &mut CounterRng, out: &mut Vec<Vec<T>>) {
        let n = out.len();
        let s1: T = rng.rademacher();
        let s2: T = rng.rademacher();
        out[0][0] = s1;
        out[1][0] = s2;
        if n >= 3 {
            let canceled = (s1 + s2).abs() < T::of(0.5);
            out[2][0] = if canceled {
                s1 * T::of(0.75)
            } else {
                T::zero()
            };
        }
        for x in out.iter_mut().skip(3) {
            x[0] = rng.rademacher();
        }
    }
}

fn first_len_check<T: Real>(first: &FirstStepLaw<T>, d: usize) -> Result<()> {
    let len = match first {
        FirstStepLaw::Deterministic(v) => v.len(),
        FirstStepLaw::GaussianShifted { mean, .. } => mean.len(),
        FirstStepLaw::SymmetricTwoPoint(v) => v.len(),
    };
    if len != d {
        return Err(Error::domain("first step dimension mismatch"));
    }
    Ok(())
}

fn first_is_symmetric<T: Real>(first: &FirstStepLaw<T>) -> bool {
    match first {
        FirstStepLaw::Deterministic(v) => v.iter().all(|&x| x == T::zero()),
        FirstStepLaw::GaussianShifted { mean, .. } => mean.iter().all(|&x| x == T::zero()),
        FirstStepLaw::SymmetricTwoPoint(_) => true,
    }
}

fn sample_v_martingale<T: Real>(
    rng: &mut CounterRng,
    first: &FirstStepLaw<T>,
    volatility: &Volatility<T>,
    step: &StepLaw<T>,
    out: &mut Vec<Vec<T>>,
) {
    let d = out[0].len();
    match first {
        FirstStepLaw::Deterministic(v) => out[0].copy_from_slice(v),
        FirstStepLaw::GaussianShifted { mean, sigma } => {
            for (o, &m) in out[0].iter_mut().zip(mean) {
                let z: T = rng.normal();
                *o = m + *sigma * z;
            }
        }
        FirstStepLaw::SymmetricTwoPoint(v) => {
            let s: T = rng.rademacher();
            for (o, &x) in out[0].iter_mut().zip(v) {
                *o = s * x;
            }
        }
    }
    let mut sum = out[0].clone();
    let mut eps = vec![T::zero(); d];
    for j in 1..out.len() {
        let sum_norm = sum.iter().fold(T::zero(), |a, &v| a + v * v).sqrt();
        let sigma = volatility.eval(sum_norm);
        step.draw(rng, &sum, &mut eps);
        for (x, &e) in out[j].iter_mut().zip(&eps) {
            *x = sigma * e;
        }
        for (s, &x) in sum.iter_mut().zip(&out[j]) {
            *s += x;
        }
    }
}
