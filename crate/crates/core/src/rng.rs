//! Counter-based random number generation.
//!
//! Every estimate in this crate derives per-sample randomness from a
//! `(seed, stream)` pair, so results are identical under any evaluation
//! order and repeat runs reproduce byte for byte.

use crate::real::Real;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hierarchical seed derivation: `SeedTree::new(seed).child(i).child(j)`
/// yields a well-separated stream key for sub-component `(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedTree(u64);

impl SeedTree {
    pub fn new(seed: u64) -> Self {
        SeedTree(splitmix64(seed ^ GAMMA))
    }

    #[must_use]
    pub fn child(self, index: u64) -> Self {
        SeedTree(splitmix64(self.0 ^ splitmix64(index.wrapping_add(GAMMA))))
    }

    pub fn rng(self) -> CounterRng {
        CounterRng {
            key: self.0,
            counter: 0,
            spare_normal: None,
        }
    }

    pub fn key(self) -> u64 {
        self.0
    }
}

/// Splitmix64-style counter RNG: output k = hash(key + k * GAMMA).
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
    spare_normal: Option<f64>,
}

impl CounterRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        SeedTree::new(seed).child(stream).rng()
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let out = splitmix64(self.key.wrapping_add(self.counter.wrapping_mul(GAMMA)));
        self.counter = self.counter.wrapping_add(1);
        out
    }

    /// Uniform draw in the open interval (0, 1), 53-bit resolution.
    #[inline]
    pub fn uniform<T: Real>(&mut self) -> T {
        let bits = self.next_u64() >> 11;
        T::of((bits as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0))
    }

    /// Uniform draw in `(lo, hi)`.
    #[inline]
    pub fn uniform_in<T: Real>(&mut self, lo: T, hi: T) -> T {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal via Box-Muller; the second variate of each pair is cached.
    pub fn normal<T: Real>(&mut self) -> T {
        if let Some(z) = self.spare_normal.take() {
            return T::of(z);
        }
        let u1: f64 = self.uniform();
        let u2: f64 = self.uniform();
        let mag = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare_normal = Some(mag * angle.sin());
        T::of(mag * angle.cos())
    }

    pub fn fill_normal<T: Real>(&mut self, out: &mut [T]) {
        for v in out.iter_mut() {
            *v = self.normal();
        }
    }

    /// Random sign, +1 or -1 with equal probability.
    #[inline]
    pub fn rademacher<T: Real>(&mut self) -> T {
        if self.next_u64() & 1 == 0 {
            T::one()
        } else {
            -T::one()
        }
    }

    #[inline]
    pub fn random_bit(&mut self) -> bool {
        self.next_u64() & 1 == 0
    }

    /// Index in `0..n` (n must be small relative to 2^64; modulo bias is negligible).
    #[inline]
    pub fn index(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    /// Pick an index with the given nonnegative weights (need not be normalized).
    pub fn pick_weighted<T: Real>(&mut self, weights: &[T]) -> usize {
        let total: T = weights.iter().fold(T::zero(), |acc, &w| acc + w);
        let mut u = self.uniform::<T>() * total;
        for (i, &w) in weights.iter().enumerate() {
            u = u - w;
            if u < T::zero() {
                return i;
            }
        }
        weights.len() - 1
    }

    /// Uniform point on the unit sphere of `R^d` via normalized Gaussians.
    pub fn unit_vector<T: Real>(&mut self, out: &mut [T]) {
        loop {
            let mut norm_sq = T::zero();
            for v in out.iter_mut() {
                let z: T = self.normal();
                *v = z;
                norm_sq += z * z;
            }
            let norm = norm_sq.sqrt();
            if norm > T::of(1e-8) {
                for v in out.iter_mut() {
                    *v = *v / norm;
                }
                return;
            }
        }
    }
}

/// Online mean / standard-error accumulator (Welford).
#[derive(Debug, Clone, Copy)]
pub struct RunningStats<T> {
    n: u64,
    mean: T,
    m2: T,
}

impl<T: Real> Default for RunningStats<T> {
    fn default() -> Self {
        RunningStats {
            n: 0,
            mean: T::zero(),
            m2: T::zero(),
        }
    }
}

impl<T: Real> RunningStats<T> {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn push(&mut self, x: T) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / T::of(self.n as f64);
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> T {
        self.mean
    }

    pub fn variance(&self) -> T {
        if self.n < 2 {
            T::zero()
        } else {
            self.m2 / T::of((self.n - 1) as f64)
        }
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> T {
        if self.n < 2 {
            T::zero()
        } else {
            (self.variance() / T::of(self.n as f64)).sqrt()
        }
    }
}
