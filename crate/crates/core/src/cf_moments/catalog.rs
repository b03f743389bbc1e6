//! Distribution catalog: samplable d-dimensional models with closed-form
//! characteristic functionals and directional moments where available.
//!
//! The families are chosen so that every model offers at least one oracle:
//! an analytic norm moment, an exact characteristic functional, or both.

use crate::error::{Error, Result};
use crate::kernels::sphere_pth_moment;
use crate::quadrature::{gauss_legendre, CosGaussTerm, DecayEnvelope, GaussLegendre, TailSpec};
use crate::real::Real;
use crate::rng::CounterRng;
use crate::special::ln_gamma;

/// Covariance specification for Gaussian models.
#[derive(Debug, Clone, PartialEq)]
pub enum Covariance<T> {
    Identity,
    Scalar(T),
    Diagonal(Vec<T>),
    Full(Vec<Vec<T>>),
}

/// Law of the nonnegative magnitude multiplying a scaled Rademacher vector.
#[derive(Debug, Clone, PartialEq)]
pub enum MagnitudeLaw<T> {
    Unit,
    /// Finitely many atoms (weight, value), value >= 0.
    Atoms(Vec<(T, T)>),
}

impl<T: Real> MagnitudeLaw<T> {
    fn atoms(&self) -> Vec<(T, T)> {
        match self {
            MagnitudeLaw::Unit => vec![(T::one(), T::one())],
            MagnitudeLaw::Atoms(a) => a.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Kind<T> {
    Gaussian {
        mean: Vec<T>,
        cov: Covariance<T>,
        chol: Option<Vec<Vec<T>>>,
    },
    PointMass {
        x: Vec<T>,
    },
    SymmetricTwoPoint {
        x: Vec<T>,
    },
    ScaledRademacher {
        x: Vec<T>,
        magnitudes: Vec<(T, T)>,
    },
    UniformSphere {
        radius: T,
    },
    IndependentSum {
        parts: Vec<RandomVectorModel<T>>,
    },
    FiniteMixture {
        parts: Vec<(T, RandomVectorModel<T>)>,
    },
}

/// A samplable d-dimensional distribution with optional analytic moments and
/// a characteristic functional.
#[derive(Debug, Clone)]
pub struct RandomVectorModel<T> {
    dim: usize,
    kind: Kind<T>,
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

fn norm<T: Real>(v: &[T]) -> T {
    dot(v, v).sqrt()
}

/// Lower-triangular Cholesky factor; rejects matrices that are not PSD.
fn cholesky<T: Real>(m: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let n = m.len();
    let scale = m
        .iter()
        .enumerate()
        .map(|(i, row)| row[i].abs())
        .fold(T::zero(), |a, b| a.max(b))
        .max(T::one());
    let tol = T::epsilon() * T::of(64.0) * scale;
    let mut l = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            if (m[i][j] - m[j][i]).abs() > tol * T::of(16.0) {
                return Err(Error::InvalidCovariance);
            }
            let mut sum = m[i][j];
            for k in 0..j {
                sum -= l[i][k] * l[j][k];
            }
            if i == j {
                if sum < -tol {
                    return Err(Error::InvalidCovariance);
                }
                l[i][j] = sum.max(T::zero()).sqrt();
            } else if l[j][j] > tol {
                l[i][j] = sum / l[j][j];
            } else if sum.abs() > tol * T::of(16.0) {
                return Err(Error::InvalidCovariance);
            }
        }
    }
    Ok(l)
}

impl<T: Real> RandomVectorModel<T> {
    pub fn gaussian(mean: Vec<T>, cov: Covariance<T>) -> Result<Self> {
        let dim = mean.len();
        crate::d_validate(dim)?;
        let chol = match &cov {
            Covariance::Identity => None,
            Covariance::Scalar(s) => {
                if *s < T::zero() {
                    return Err(Error::InvalidCovariance);
                }
                None
            }
            Covariance::Diagonal(d) => {
                if d.len() != dim {
                    return Err(Error::domain("diagonal covariance length mismatch"));
                }
                if d.iter().any(|&v| v < T::zero()) {
                    return Err(Error::InvalidCovariance);
                }
                None
            }
            Covariance::Full(m) => {
                if m.len() != dim || m.iter().any(|row| row.len() != dim) {
                    return Err(Error::domain("covariance matrix shape mismatch"));
                }
                Some(cholesky(m)?)
            }
        };
        Ok(RandomVectorModel {
            dim,
            kind: Kind::Gaussian { mean, cov, chol },
        })
    }

    pub fn standard_gaussian(dim: usize) -> Result<Self> {
        Self::gaussian(vec![T::zero(); dim], Covariance::Identity)
    }

    pub fn point_mass(x: Vec<T>) -> Result<Self> {
        crate::d_validate(x.len())?;
        let dim = x.len();
        Ok(RandomVectorModel {
            dim,
            kind: Kind::PointMass { x },
        })
    }

    pub fn symmetric_two_point(x: Vec<T>) -> Result<Self> {
        crate::d_validate(x.len())?;
        let dim = x.len();
        Ok(RandomVectorModel {
            dim,
            kind: Kind::SymmetricTwoPoint { x },
        })
    }

    pub fn scaled_rademacher(x: Vec<T>, magnitude: MagnitudeLaw<T>) -> Result<Self> {
        crate::d_validate(x.len())?;
        let atoms = magnitude.atoms();
        if atoms.is_empty() {
            return Err(Error::domain("magnitude law needs at least one atom"));
        }
        if atoms.iter().any(|&(w, v)| w < T::zero() || v < T::zero()) {
            return Err(Error::domain(
                "magnitude atoms need nonnegative weight and value",
            ));
        }
        let total: T = atoms.iter().fold(T::zero(), |acc, &(w, _)| acc + w);
        if (total - T::one()).abs() > T::of(1e-9) {
            return Err(Error::domain("magnitude weights must sum to 1"));
        }
        let dim = x.len();
        Ok(RandomVectorModel {
            dim,
            kind: Kind::ScaledRademacher {
                x,
                magnitudes: atoms,
            },
        })
    }

    pub fn uniform_sphere(dim: usize, radius: T) -> Result<Self> {
        crate::d_validate(dim)?;
        if radius < T::zero() {
            return Err(Error::domain("sphere radius must be nonnegative"));
        }
        Ok(RandomVectorModel {
            dim,
            kind: Kind::UniformSphere { radius },
        })
    }

    pub fn independent_sum(parts: Vec<RandomVectorModel<T>>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::domain("independent sum needs at least one part"));
        }
        let dim = parts[0].dim;
        if parts.iter().any(|m| m.dim != dim) {
            return Err(Error::domain(
                "independent sum parts must share a dimension",
            ));
        }
        Ok(RandomVectorModel {
            dim,
            kind: Kind::IndependentSum { parts },
        })
    }

    pub fn finite_mixture(parts: Vec<(T, RandomVectorModel<T>)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::domain("mixture needs at least one part"));
        }
        let dim = parts[0].1.dim;
        if parts.iter().any(|(_, m)| m.dim != dim) {
            return Err(Error::domain("mixture parts must share a dimension"));
        }
        if parts.iter().any(|(w, _)| *w < T::zero()) {
            return Err(Error::domain("mixture weights must be nonnegative"));
        }
        let total: T = parts.iter().fold(T::zero(), |acc, (w, _)| acc + *w);
        if (total - T::one()).abs() > T::of(1e-9) {
            return Err(Error::domain("mixture weights must sum to 1"));
        }
        Ok(RandomVectorModel {
            dim,
            kind: Kind::FiniteMixture { parts },
        })
    }

    /// Model scaled by a constant factor: law of c X.
    pub fn scaled(&self, c: T) -> Result<Self> {
        let scale_vec = |v: &[T]| v.iter().map(|&x| c * x).collect::<Vec<_>>();
        match &self.kind {
            Kind::Gaussian { mean, cov, .. } => {
                let c2 = c * c;
                let cov = match cov {
                    Covariance::Identity => Covariance::Scalar(c2),
                    Covariance::Scalar(s) => Covariance::Scalar(c2 * *s),
                    Covariance::Diagonal(d) => {
                        Covariance::Diagonal(d.iter().map(|&v| c2 * v).collect())
                    }
                    Covariance::Full(m) => Covariance::Full(
                        m.iter()
                            .map(|row| row.iter().map(|&v| c2 * v).collect())
                            .collect(),
                    ),
                };
                Self::gaussian(scale_vec(mean), cov)
            }
            Kind::PointMass { x } => Self::point_mass(scale_vec(x)),
            Kind::SymmetricTwoPoint { x } => Self::symmetric_two_point(scale_vec(x)),
            Kind::ScaledRademacher { x, magnitudes } => {
                Self::scaled_rademacher(scale_vec(x), MagnitudeLaw::Atoms(magnitudes.clone()))
            }
            Kind::UniformSphere { radius } => Self::uniform_sphere(self.dim, c.abs() * *radius),
            Kind::IndependentSum { parts } => Self::independent_sum(
                parts
                    .iter()
                    .map(|m| m.scaled(c))
                    .collect::<Result<Vec<_>>>()?,
            ),
            Kind::FiniteMixture { parts } => Self::finite_mixture(
                parts
                    .iter()
                    .map(|(w, m)| Ok((*w, m.scaled(c)?)))
                    .collect::<Result<Vec<_>>>()?,
            ),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Mean vector, when finite and known.
    pub fn mean(&self) -> Vec<T> {
        match &self.kind {
            Kind::Gaussian { mean, .. } => mean.clone(),
            Kind::PointMass { x } => x.clone(),
            Kind::SymmetricTwoPoint { .. }
            | Kind::ScaledRademacher { .. }
            | Kind::UniformSphere { .. } => vec![T::zero(); self.dim],
            Kind::IndependentSum { parts } => {
                let mut acc = vec![T::zero(); self.dim];
                for part in parts {
                    for (a, b) in acc.iter_mut().zip(part.mean()) {
                        *a += b;
                    }
                }
                acc
            }
            Kind::FiniteMixture { parts } => {
                let mut acc = vec![T::zero(); self.dim];
                for (w, part) in parts {
                    for (a, b) in acc.iter_mut().zip(part.mean()) {
                        *a += *w * b;
                    }
                }
                acc
            }
        }
    }

    /// Whether the law is invariant under all orthogonal maps; isotropic
    /// models have direction-independent radial profiles, which the moment
    /// engine exploits.
    pub fn is_isotropic(&self) -> bool {
        match &self.kind {
            Kind::Gaussian { mean, cov, .. } => {
                mean.iter().all(|&m| m == T::zero())
                    && matches!(cov, Covariance::Identity | Covariance::Scalar(_))
            }
            Kind::PointMass { x } => x.iter().all(|&v| v == T::zero()),
            Kind::SymmetricTwoPoint { .. } | Kind::ScaledRademacher { .. } => false,
            Kind::UniformSphere { .. } => true,
            Kind::IndependentSum { parts } => parts.iter().all(|m| m.is_isotropic()),
            Kind::FiniteMixture { parts } => parts.iter().all(|(_, m)| m.is_isotropic()),
        }
    }

    /// Draw one sample, adding it into `acc`.
    pub fn sample_add(&self, rng: &mut CounterRng, acc: &mut [T]) {
        debug_assert_eq!(acc.len(), self.dim);
        match &self.kind {
            Kind::Gaussian { mean, cov, chol } => match cov {
                Covariance::Identity => {
                    for (a, &m) in acc.iter_mut().zip(mean) {
                        *a += m + rng.normal();
                    }
                }
                Covariance::Scalar(s) => {
                    let sd = s.sqrt();
                    for (a, &m) in acc.iter_mut().zip(mean) {
                        *a += m + sd * rng.normal();
                    }
                }
                Covariance::Diagonal(d) => {
                    for ((a, &m), &v) in acc.iter_mut().zip(mean).zip(d) {
                        *a += m + v.sqrt() * rng.normal();
                    }
                }
                Covariance::Full(_) => {
                    let l = chol.as_ref().expect("cholesky cached at construction");
                    let z: Vec<T> = (0..self.dim).map(|_| rng.normal()).collect();
                    for (i, (a, &m)) in acc.iter_mut().zip(mean).enumerate() {
                        let mut s = m;
                        for (k, &zk) in z.iter().enumerate().take(i + 1) {
                            s += l[i][k] * zk;
                        }
                        *a += s;
                    }
                }
            },
            Kind::PointMass { x } => {
                for (a, &v) in acc.iter_mut().zip(x) {
                    *a += v;
                }
            }
            Kind::SymmetricTwoPoint { x } => {
                let s: T = rng.rademacher();
                for (a, &v) in acc.iter_mut().zip(x) {
                    *a += s * v;
                }
            }
            Kind::ScaledRademacher { x, magnitudes } => {
                let s: T = rng.rademacher();
                let weights: Vec<T> = magnitudes.iter().map(|&(w, _)| w).collect();
                let mag = magnitudes[rng.pick_weighted(&weights)].1;
                for (a, &v) in acc.iter_mut().zip(x) {
                    *a += s * mag * v;
                }
            }
            Kind::UniformSphere { radius } => {
                let mut dir = vec![T::zero(); self.dim];
                rng.unit_vector(&mut dir);
                for (a, v) in acc.iter_mut().zip(dir) {
                    *a += *radius * v;
                }
            }
            Kind::IndependentSum { parts } => {
                for part in parts {
                    part.sample_add(rng, acc);
                }
            }
            Kind::FiniteMixture { parts } => {
                let weights: Vec<T> = parts.iter().map(|(w, _)| *w).collect();
                let pick = rng.pick_weighted(&weights);
                parts[pick].1.sample_add(rng, acc);
            }
        }
    }

    pub fn sample_into(&self, rng: &mut CounterRng, out: &mut [T]) {
        for v in out.iter_mut() {
            *v = T::zero();
        }
        self.sample_add(rng, out);
    }

    /// Quadratic form t' Sigma t of a Gaussian covariance.
    fn quad_form(cov: &Covariance<T>, t: &[T]) -> T {
        match cov {
            Covariance::Identity => dot(t, t),
            Covariance::Scalar(s) => *s * dot(t, t),
            Covariance::Diagonal(d) => t
                .iter()
                .zip(d)
                .fold(T::zero(), |acc, (&ti, &di)| acc + ti * ti * di),
            Covariance::Full(m) => {
                let mut acc = T::zero();
                for (i, &ti) in t.iter().enumerate() {
                    acc += ti * dot(&m[i], t);
                }
                acc
            }
        }
    }

    /// Characteristic functional as a complex number (Re, Im).
    pub fn evaluate_cf(&self, t: &[T]) -> (T, T) {
        debug_assert_eq!(t.len(), self.dim);
        match &self.kind {
            Kind::Gaussian { mean, cov, .. } => {
                let q = Self::quad_form(cov, t);
                let damp = (-q * T::of(0.5)).exp();
                let phase = dot(t, mean);
                (damp * phase.cos(), damp * phase.sin())
            }
            Kind::PointMass { x } => {
                let phase = dot(t, x);
                (phase.cos(), phase.sin())
            }
            Kind::SymmetricTwoPoint { x } => ((dot(t, x)).cos(), T::zero()),
            Kind::ScaledRademacher { x, magnitudes } => {
                let b = dot(t, x);
                let re = magnitudes
                    .iter()
                    .fold(T::zero(), |acc, &(w, m)| acc + w * (m * b).cos());
                (re, T::zero())
            }
            Kind::UniformSphere { radius } => {
                (sphere_cf_profile(self.dim, *radius * norm(t)), T::zero())
            }
            Kind::IndependentSum { parts } => {
                let mut re = T::one();
                let mut im = T::zero();
                for part in parts {
                    let (pr, pi) = part.evaluate_cf(t);
                    let nr = re * pr - im * pi;
                    let ni = re * pi + im * pr;
                    re = nr;
                    im = ni;
                }
                (re, im)
            }
            Kind::FiniteMixture { parts } => {
                let mut re = T::zero();
                let mut im = T::zero();
                for (w, part) in parts {
                    let (pr, pi) = part.evaluate_cf(t);
                    re += *w * pr;
                    im += *w * pi;
                }
                (re, im)
            }
        }
    }

    /// Re f_X(t).
    pub fn evaluate_re(&self, t: &[T]) -> T {
        self.evaluate_cf(t).0
    }

    /// Largest directional moment order the model declares.
    pub fn max_moment_order(&self) -> usize {
        match &self.kind {
            Kind::IndependentSum { parts } => parts
                .iter()
                .map(|m| m.max_moment_order())
                .min()
                .unwrap_or(0),
            Kind::FiniteMixture { parts } => parts
                .iter()
                .map(|(_, m)| m.max_moment_order())
                .min()
                .unwrap_or(0),
            _ => 64,
        }
    }

    /// Raw directional moment E (t . X)^order.
    pub fn directional_moment(&self, t: &[T], order: usize) -> Result<T> {
        if order > self.max_moment_order() {
            return Err(Error::MissingMoments { needed: order });
        }
        Ok(self.directional_moment_unchecked(t, order))
    }

    fn directional_moment_unchecked(&self, t: &[T], order: usize) -> T {
        if order == 0 {
            return T::one();
        }
        match &self.kind {
            Kind::Gaussian { mean, cov, .. } => {
                // Moments of N(mu, s2) via m_k = mu m_{k-1} + (k-1) s2 m_{k-2}.
                let mu = dot(t, mean);
                let s2 = Self::quad_form(cov, t);
                let mut prev = T::one();
                let mut cur = mu;
                for k in 2..=order {
                    let next = mu * cur + T::of_usize(k - 1) * s2 * prev;
                    prev = cur;
                    cur = next;
                }
                cur
            }
            Kind::PointMass { x } => dot(t, x).powi(order as i32),
            Kind::SymmetricTwoPoint { x } => {
                if order % 2 == 1 {
                    T::zero()
                } else {
                    dot(t, x).powi(order as i32)
                }
            }
            Kind::ScaledRademacher { x, magnitudes } => {
                if order % 2 == 1 {
                    T::zero()
                } else {
                    let b = dot(t, x).powi(order as i32);
                    let mk = magnitudes
                        .iter()
                        .fold(T::zero(), |acc, &(w, m)| acc + w * m.powi(order as i32));
                    b * mk
                }
            }
            Kind::UniformSphere { radius } => {
                if order % 2 == 1 {
                    T::zero()
                } else {
                    let scale = (*radius * norm(t)).powi(order as i32);
                    scale * sphere_pth_moment(self.dim, T::of_usize(order)).unwrap_or(T::nan())
                }
            }
            Kind::IndependentSum { parts } => {
                // Binomial convolution of raw moment sequences.
                let mut acc = vec![T::zero(); order + 1];
                acc[0] = T::one();
                for part in parts {
                    let part_moments: Vec<T> = (0..=order)
                        .map(|k| part.directional_moment_unchecked(t, k))
                        .collect();
                    let mut next = vec![T::zero(); order + 1];
                    for n in 0..=order {
                        let mut binom = T::one();
                        for k in 0..=n {
                            next[n] += binom * acc[n - k] * part_moments[k];
                            binom = binom * T::of_usize(n - k) / T::of_usize(k + 1);
                        }
                    }
                    acc = next;
                }
                acc[order]
            }
            Kind::FiniteMixture { parts } => parts.iter().fold(T::zero(), |s, (w, m)| {
                s + *w * m.directional_moment_unchecked(t, order)
            }),
        }
    }

    /// E (t . X)^{2j}.
    pub fn even_directional_moment(&self, t: &[T], j: usize) -> Result<T> {
        self.directional_moment(t, 2 * j)
    }

    /// Closed-form E ||X||^p, when the family provides one.
    pub fn analytic_norm_moment(&self, p: T) -> Option<T> {
        if p <= T::zero() {
            return None;
        }
        match &self.kind {
            Kind::Gaussian { mean, cov, .. } => {
                // chi-distribution moments for centered scalar covariances
                if mean.iter().any(|&m| m != T::zero()) {
                    return None;
                }
                let sigma = match cov {
                    Covariance::Identity => T::one(),
                    Covariance::Scalar(s) => s.sqrt(),
                    _ => return None,
                };
                let half = T::of(0.5);
                let d = T::of_usize(self.dim);
                let ln = p * half * T::of(2.0).ln() + ln_gamma((d + p) * half) - ln_gamma(d * half);
                Some(sigma.powf(p) * ln.exp())
            }
            Kind::PointMass { x } | Kind::SymmetricTwoPoint { x } => Some(norm(x).powf(p)),
            Kind::ScaledRademacher { x, magnitudes } => {
                let mk = magnitudes
                    .iter()
                    .fold(T::zero(), |acc, &(w, m)| acc + w * m.powf(p));
                Some(norm(x).powf(p) * mk)
            }
            Kind::UniformSphere { radius } => Some(radius.powf(p)),
            Kind::IndependentSum { .. } => None,
            Kind::FiniteMixture { parts } => {
                let mut acc = T::zero();
                for (w, m) in parts {
                    acc += *w * m.analytic_norm_moment(p)?;
                }
                Some(acc)
            }
        }
    }

    /// Closed-form radial structure sum w e^{-q r^2} e^{i b r} along `omega`,
    /// when the whole model tree stays inside that family.
    pub(crate) fn cosine_gauss_terms(&self, omega: &[T]) -> Option<Vec<CosGaussTerm<T>>> {
        const MAX_TERMS: usize = 512;
        match &self.kind {
            Kind::Gaussian { mean, cov, .. } => Some(vec![CosGaussTerm {
                weight: T::one(),
                gauss: Self::quad_form(cov, omega) * T::of(0.5),
                freq: dot(omega, mean),
            }]),
            Kind::PointMass { x } => Some(vec![CosGaussTerm {
                weight: T::one(),
                gauss: T::zero(),
                freq: dot(omega, x),
            }]),
            Kind::SymmetricTwoPoint { x } => {
                let b = dot(omega, x);
                let half = T::of(0.5);
                Some(vec![
                    CosGaussTerm {
                        weight: half,
                        gauss: T::zero(),
                        freq: b,
                    },
                    CosGaussTerm {
                        weight: half,
                        gauss: T::zero(),
                        freq: -b,
                    },
                ])
            }
            Kind::ScaledRademacher { x, magnitudes } => {
                let b = dot(omega, x);
                let half = T::of(0.5);
                let mut terms = Vec::with_capacity(2 * magnitudes.len());
                for &(w, m) in magnitudes {
                    terms.push(CosGaussTerm {
                        weight: half * w,
                        gauss: T::zero(),
                        freq: m * b,
                    });
                    terms.push(CosGaussTerm {
                        weight: half * w,
                        gauss: T::zero(),
                        freq: -(m * b),
                    });
                }
                Some(terms)
            }
            Kind::UniformSphere { radius } => {
                if self.dim == 1 {
                    let half = T::of(0.5);
                    Some(vec![
                        CosGaussTerm {
                            weight: half,
                            gauss: T::zero(),
                            freq: *radius,
                        },
                        CosGaussTerm {
                            weight: half,
                            gauss: T::zero(),
                            freq: -*radius,
                        },
                    ])
                } else {
                    None
                }
            }
            Kind::IndependentSum { parts } => {
                let mut acc = vec![CosGaussTerm {
                    weight: T::one(),
                    gauss: T::zero(),
                    freq: T::zero(),
                }];
                for part in parts {
                    let terms = part.cosine_gauss_terms(omega)?;
                    if acc.len() * terms.len() > MAX_TERMS {
                        return None;
                    }
                    let mut next = Vec::with_capacity(acc.len() * terms.len());
                    for a in &acc {
                        for t in &terms {
                            next.push(CosGaussTerm {
                                weight: a.weight * t.weight,
                                gauss: a.gauss + t.gauss,
                                freq: a.freq + t.freq,
                            });
                        }
                    }
                    acc = next;
                }
                Some(acc)
            }
            Kind::FiniteMixture { parts } => {
                let mut acc = Vec::new();
                for (w, part) in parts {
                    let terms = part.cosine_gauss_terms(omega)?;
                    for t in terms {
                        acc.push(CosGaussTerm {
                            weight: *w * t.weight,
                            ..t
                        });
                    }
                    if acc.len() > MAX_TERMS {
                        return None;
                    }
                }
                Some(acc)
            }
        }
    }

    /// Magnitude envelope of |Re f(r omega)| past the truncation radius.
    pub(crate) fn tail_envelope(&self, omega: &[T]) -> DecayEnvelope<T> {
        match &self.kind {
            Kind::Gaussian { cov, .. } => {
                DecayEnvelope::gaussian(T::one(), Self::quad_form(cov, omega) * T::of(0.5))
            }
            Kind::PointMass { .. }
            | Kind::SymmetricTwoPoint { .. }
            | Kind::ScaledRademacher { .. } => DecayEnvelope::unit(),
            Kind::UniformSphere { radius } => sphere_cf_envelope(self.dim, *radius),
            Kind::IndependentSum { parts } => parts
                .iter()
                .map(|m| m.tail_envelope(omega))
                .fold(DecayEnvelope::unit(), DecayEnvelope::product),
            Kind::FiniteMixture { parts } => {
                let pieces: Vec<(T, DecayEnvelope<T>)> = parts
                    .iter()
                    .map(|(w, m)| (*w, m.tail_envelope(omega)))
                    .collect();
                DecayEnvelope::mixture(&pieces)
            }
        }
    }

    /// Tail handling for the radial profile along `omega`.
    pub(crate) fn tail_spec(&self, omega: &[T]) -> TailSpec<T> {
        if let Some(terms) = self.cosine_gauss_terms(omega) {
            return TailSpec::CosineGauss(terms);
        }
        match &self.kind {
            Kind::UniformSphere { radius } if *radius > T::zero() => TailSpec::Oscillatory {
                half_period: T::PI() / *radius,
                envelope: self.tail_envelope(omega),
            },
            _ => TailSpec::BoundOnly {
                envelope: self.tail_envelope(omega),
            },
        }
    }

    /// Flatten nested mixtures into weighted non-mixture leaves. Moments and
    /// the characteristic functional are linear in the mixture weights, so
    /// radial integrals can be taken leaf by leaf, each with its own best
    /// tail handling.
    pub(crate) fn mixture_leaves(&self) -> Vec<(T, &RandomVectorModel<T>)> {
        fn walk<'m, T: Real>(
            model: &'m RandomVectorModel<T>,
            weight: T,
            out: &mut Vec<(T, &'m RandomVectorModel<T>)>,
        ) {
            match &model.kind {
                Kind::FiniteMixture { parts } => {
                    for (w, part) in parts {
                        walk(part, weight * *w, out);
                    }
                }
                _ => out.push((weight, model)),
            }
        }
        let mut leaves = Vec::new();
        walk(self, T::one(), &mut leaves);
        leaves
    }

    /// Compiled radial evaluator r -> f_X(r omega) as (Re, Im).
    pub(crate) fn radial_eval(&self, omega: &[T]) -> RadialEval<T> {
        match &self.kind {
            Kind::UniformSphere { radius } => RadialEval::Sphere {
                scale: *radius,
                profile: SphereCf::new(self.dim),
            },
            Kind::IndependentSum { parts } => {
                RadialEval::Product(parts.iter().map(|m| m.radial_eval(omega)).collect())
            }
            Kind::FiniteMixture { parts } => RadialEval::Mixture(
                parts
                    .iter()
                    .map(|(w, m)| (*w, m.radial_eval(omega)))
                    .collect(),
            ),
            _ => RadialEval::Terms(
                self.cosine_gauss_terms(omega)
                    .expect("leaf families are closed-form"),
            ),
        }
    }
}

/// Radial characteristic profile of the uniform distribution on the sphere
/// of R^d: phi_d(u) = E cos(u (w . e1)).
#[derive(Debug, Clone)]
pub(crate) struct SphereCf<T> {
    d: usize,
    rule: Option<GaussLegendre<T>>,
    norm: T,
}

impl<T: Real> SphereCf<T> {
    pub(crate) fn new(d: usize) -> Self {
        if d <= 3 {
            SphereCf {
                d,
                rule: None,
                norm: T::one(),
            }
        } else {
            // density of w . e1 is proportional to (1 - t^2)^{(d-3)/2}
            let half = T::of(0.5);
            let df = T::of_usize(d);
            let ln_norm =
                ln_gamma(df * half) - half * T::PI().ln() - ln_gamma((df - T::one()) * half);
            SphereCf {
                d,
                rule: Some(gauss_legendre(64)),
                norm: ln_norm.exp(),
            }
        }
    }

    pub(crate) fn eval(&self, u: T) -> T {
        match self.d {
            1 => u.cos(),
            2 => T::of(libm::j0(u.as_f64())),
            3 => {
                let x = u.abs();
                if x < T::of(1e-4) {
                    let x2 = x * x;
                    T::one() - x2 / T::of(6.0) + x2 * x2 / T::of(120.0)
                } else {
                    x.sin() / x
                }
            }
            _ => {
                let rule = self.rule.as_ref().expect("rule built for d > 3");
                let nu = (T::of_usize(self.d) - T::of(3.0)) * T::of(0.5);
                self.norm
                    * rule.integrate(
                        |t: T| (u * t).cos() * (T::one() - t * t).max(T::zero()).powf(nu),
                        -T::one(),
                        T::one(),
                    )
            }
        }
    }
}

fn sphere_cf_envelope<T: Real>(d: usize, radius: T) -> DecayEnvelope<T> {
    if radius == T::zero() {
        return DecayEnvelope::unit();
    }
    match d {
        1 => DecayEnvelope::unit(),
        // |J0(u)| <~ sqrt(2 / (pi u)); 1.1 covers the pre-asymptotic range
        2 => DecayEnvelope::power(
            T::of(1.1) * (T::of(2.0) / (T::PI() * radius)).sqrt(),
            T::of(0.5),
        ),
        3 => DecayEnvelope::power(T::one() / radius, T::one()),
        // crude but valid first-order integration-by-parts bound
        _ => DecayEnvelope::power(T::of_usize(d) / radius, T::one()),
    }
}

pub(crate) fn sphere_cf_profile<T: Real>(d: usize, u: T) -> T {
    SphereCf::new(d).eval(u)
}

/// Compiled per-direction evaluator of the characteristic functional.
#[derive(Debug, Clone)]
pub(crate) enum RadialEval<T> {
    Terms(Vec<CosGaussTerm<T>>),
    Sphere { scale: T, profile: SphereCf<T> },
    Product(Vec<RadialEval<T>>),
    Mixture(Vec<(T, RadialEval<T>)>),
}

impl<T: Real> RadialEval<T> {
    pub(crate) fn eval(&self, r: T) -> (T, T) {
        match self {
            RadialEval::Terms(terms) => {
                let mut re = T::zero();
                let mut im = T::zero();
                for t in terms {
                    let damp = if t.gauss == T::zero() {
                        T::one()
                    } else {
                        (-t.gauss * r * r).exp()
                    };
                    let phase = t.freq * r;
                    re += t.weight * damp * phase.cos();
                    im += t.weight * damp * phase.sin();
                }
                (re, im)
            }
            RadialEval::Sphere { scale, profile } => (profile.eval(*scale * r), T::zero()),
            RadialEval::Product(parts) => {
                let mut re = T::one();
                let mut im = T::zero();
                for p in parts {
                    let (pr, pi) = p.eval(r);
                    let nr = re * pr - im * pi;
                    let ni = re * pi + im * pr;
                    re = nr;
                    im = ni;
                }
                (re, im)
            }
            RadialEval::Mixture(parts) => {
                let mut re = T::zero();
                let mut im = T::zero();
                for (w, p) in parts {
                    let (pr, pi) = p.eval(r);
                    re += *w * pr;
                    im += *w * pi;
                }
                (re, im)
            }
        }
    }
}

/// View of a model as its characteristic functional.
#[derive(Debug, Clone, Copy)]
pub struct CharacteristicFunctional<'a, T> {
    model: &'a RandomVectorModel<T>,
}

impl<'a, T: Real> CharacteristicFunctional<'a, T> {
    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    pub fn evaluate_re(&self, t: &[T]) -> T {
        self.model.evaluate_re(t)
    }

    pub fn even_directional_moment(&self, t: &[T], j: usize) -> Result<T> {
        self.model.even_directional_moment(t, j)
    }

    pub fn max_even_order(&self) -> usize {
        self.model.max_moment_order() / 2
    }
}

impl<T: Real> RandomVectorModel<T> {
    /// The characteristic functional; every catalog family has one in
    /// closed (or compiled) form.
    pub fn cf(&self) -> CharacteristicFunctional<'_, T> {
        CharacteristicFunctional { model: self }
    }
}
