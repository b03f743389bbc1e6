//! Cross-dimension consistency: a moment inequality of the shape
//!
//! ```text
//! sum_k a_k E || sum_j b_{k,j} X_j ||^p >= 0
//! ```
//!
//! that holds for a linearly invariant family of scalar sequences transfers
//! to random vectors in any dimension. The lab exercises this operationally:
//! the same template is re-run on random isometric embeddings of the
//! generating sequences and must never be violated at 3 sigma.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::rng::{CounterRng, RunningStats, SeedTree};

use super::sequences::SequenceSpec;
use super::{CheckMetadata, InequalityReport, Verdict};

/// Coefficients (a_k) and combination matrix (b_{k,j}).
#[derive(Debug, Clone)]
pub struct InequalityTemplate<T> {
    pub label: &'static str,
    pub coefficients: Vec<T>,
    pub combinations: Vec<Vec<T>>,
}

impl<T: Real> InequalityTemplate<T> {
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.coefficients.len() != self.combinations.len() {
            return Err(Error::domain(
                "template needs one coefficient per combination",
            ));
        }
        if self.combinations.iter().any(|row| row.len() != n) {
            return Err(Error::domain(
                "template rows must match the sequence length",
            ));
        }
        Ok(())
    }

    /// E||X_1||^p + C sum_{j >= 2} E||X_j||^p - E||S_n||^p >= 0.
    pub fn vbe(n: usize, constant: T) -> Self {
        let mut coefficients = vec![T::one()];
        coefficients.extend(std::iter::repeat(constant).take(n - 1));
        coefficients.push(-T::one());
        let mut combinations: Vec<Vec<T>> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| if j == k { T::one() } else { T::zero() })
                    .collect()
            })
            .collect();
        combinations.push(vec![T::one(); n]);
        InequalityTemplate {
            label: "vbe",
            coefficients,
            combinations,
        }
    }

    /// sum_j E||X_j||^p - E||S_n||^p >= 0 (symmetric steps).
    pub fn symmetric_vbe(n: usize) -> Self {
        let mut t = Self::vbe(n, T::one());
        t.label = "symmetric-vbe";
        t
    }

    /// 2 E||X_1||^p ... written on a pair: E||X_1||^p + E||X_2||^p - E||X_1 - X_2||^p >= 0.
    pub fn iid_difference() -> Self {
        InequalityTemplate {
            label: "iid-difference",
            coefficients: vec![T::one(), T::one(), -T::one()],
            combinations: vec![
                vec![T::one(), T::zero()],
                vec![T::zero(), T::one()],
                vec![T::one(), -T::one()],
            ],
        }
    }

    /// C sum_j E||X_j||^p - E||S_n||^p >= 0 for pairwise-independent sums.
    pub fn pairwise(n: usize, constant: T) -> Self {
        let mut coefficients = vec![constant; n];
        coefficients.push(-T::one());
        let mut combinations: Vec<Vec<T>> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| if j == k { T::one() } else { T::zero() })
                    .collect()
            })
            .collect();
        combinations.push(vec![T::one(); n]);
        InequalityTemplate {
            label: "pairwise",
            coefficients,
            combinations,
        }
    }
}

/// Per-dimension outcome of the transfer run.
#[derive(Debug, Clone)]
pub struct TransferSummary<T> {
    pub per_dim: Vec<(usize, InequalityReport<T>)>,
    pub all_hold: bool,
}

/// Columns of a random matrix with orthonormal columns (Gram-Schmidt on
/// Gaussian entries), mapping R^cols isometrically into R^rows.
fn random_isometry<T: Real>(rng: &mut CounterRng, rows: usize, cols: usize) -> Vec<Vec<T>> {
    assert!(cols <= rows);
    let mut basis: Vec<Vec<T>> = Vec::with_capacity(cols);
    while basis.len() < cols {
        let mut v: Vec<T> = (0..rows).map(|_| rng.normal()).collect();
        for b in &basis {
            let proj = v.iter().zip(b).fold(T::zero(), |a, (&x, &y)| a + x * y);
            for (vi, &bi) in v.iter_mut().zip(b) {
                *vi -= proj * bi;
            }
        }
        let nrm = v.iter().fold(T::zero(), |a, &x| a + x * x).sqrt();
        if nrm > T::of(1e-6) {
            for vi in v.iter_mut() {
                *vi = *vi / nrm;
            }
            basis.push(v);
        }
    }
    basis
}

/// Re-run `template` on random isometric embeddings of `base` into each of
/// `dims`, reporting the per-dimension slack statistics.
pub fn cross_dimension_consistency<T: Real>(
    template: &InequalityTemplate<T>,
    base: &SequenceSpec<T>,
    p: T,
    dims: &[usize],
    samples: usize,
) -> Result<TransferSummary<T>> {
    base.validate()?;
    template.validate(base.len)?;
    if !(p > T::zero()) {
        return Err(Error::domain("transfer check needs p > 0"));
    }
    let mut per_dim = Vec::with_capacity(dims.len());
    let mut all_hold = true;
    for (di, &target_dim) in dims.iter().enumerate() {
        if target_dim < base.dim {
            return Err(Error::domain(
                "embedding dimension below the base dimension",
            ));
        }
        let embed_key = SeedTree::new(base.seed).child(1000 + di as u64).key();
        let mut stats = RunningStats::<T>::new();
        let mut incs: Vec<Vec<T>> = Vec::new();
        let mut embedded: Vec<Vec<T>> = vec![vec![T::zero(); target_dim]; base.len];
        let mut combo = vec![T::zero(); target_dim];
        for path in 0..samples {
            base.sample_increments(path as u64, &mut incs);
            let mut erng = CounterRng::new(embed_key, path as u64);
            let basis = random_isometry::<T>(&mut erng, target_dim, base.dim);
            for (e, x) in embedded.iter_mut().zip(&incs) {
                for (i, ev) in e.iter_mut().enumerate() {
                    let mut acc = T::zero();
                    for (c, b) in x.iter().zip(&basis) {
                        acc += *c * b[i];
                    }
                    *ev = acc;
                }
            }
            let mut stat = T::zero();
            for (a_k, row) in template.coefficients.iter().zip(&template.combinations) {
                for v in combo.iter_mut() {
                    *v = T::zero();
                }
                for (b_kj, x) in row.iter().zip(&embedded) {
                    if *b_kj != T::zero() {
                        for (cv, &xv) in combo.iter_mut().zip(x) {
                            *cv += *b_kj * xv;
                        }
                    }
                }
                let nrm = combo.iter().fold(T::zero(), |a, &v| a + v * v).sqrt();
                stat += *a_k * nrm.powf(p);
            }
            stats.push(stat);
        }
        let slack = stats.mean();
        let sigma = stats.std_error();
        let verdict = Verdict::from_slack(slack, sigma);
        all_hold &= verdict != Verdict::ViolatedBeyond3Sigma;
        per_dim.push((
            target_dim,
            InequalityReport {
                lhs_estimate: T::zero(),
                rhs_estimate: slack,
                lhs_stderr: T::zero(),
                rhs_stderr: sigma,
                slack,
                combined_stderr: sigma,
                verdict,
                metadata: CheckMetadata {
                    label: format!("cross-dim/{}", template.label),
                    constant: T::one(),
                    p,
                    d: target_dim,
                    n: base.len,
                    seed: base.seed,
                    samples,
                    extras: vec![],
                },
            },
        ));
    }
    Ok(TransferSummary { per_dim, all_hold })
}
