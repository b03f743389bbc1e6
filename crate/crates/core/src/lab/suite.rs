//! The seeded default verification suite: randomized specs for every
//! statistical check, dimensions up to 8, lengths up to 10.

use crate::cf_moments::{Covariance, RandomVectorModel};
use crate::error::Result;
use crate::real::Real;
use crate::rng::CounterRng;

use super::checks::{
    check_iid_difference, check_pairwise, check_spread, check_symmetric_vbe,
    check_two_point_inequality, check_vbe,
};
use super::sequences::{
    FirstStepLaw, SequenceKind, SequenceMagnitude, SequenceSpec, StepLaw, Volatility,
};
use super::{InequalityReport, Verdict};

/// Statistical checks the randomized suite can draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteCheck {
    Vbe,
    SymmetricVbe,
    IidDifference,
    Pairwise,
    Spread,
    TwoPoint,
}

impl SuiteCheck {
    pub const ALL: [SuiteCheck; 6] = [
        SuiteCheck::Vbe,
        SuiteCheck::SymmetricVbe,
        SuiteCheck::IidDifference,
        SuiteCheck::Pairwise,
        SuiteCheck::Spread,
        SuiteCheck::TwoPoint,
    ];
}

#[derive(Debug, Clone)]
pub struct SuiteItem<T> {
    pub name: String,
    pub report: InequalityReport<T>,
}

#[derive(Debug, Clone)]
pub struct SuiteReport<T> {
    pub items: Vec<SuiteItem<T>>,
    pub violations: usize,
    pub inconclusive: usize,
}

impl<T: Real> SuiteReport<T> {
    pub fn clean(&self) -> bool {
        self.violations == 0
    }
}

fn random_step<T: Real>(rng: &mut CounterRng, symmetric: bool, d: usize) -> StepLaw<T> {
    match rng.index(if symmetric { 4 } else { 5 }) {
        0 => StepLaw::GaussianIso,
        1 => StepLaw::RademacherAxis(rng.index(d)),
        2 => StepLaw::RandomDirection,
        3 => StepLaw::SignedSumDirection,
        _ => StepLaw::SkewTwoPointAxis {
            axis: rng.index(d),
            up: rng.uniform_in(T::of(0.3), T::of(2.0)),
            down: rng.uniform_in(T::of(0.3), T::of(2.0)),
        },
    }
}

fn random_volatility<T: Real>(rng: &mut CounterRng) -> Volatility<T> {
    match rng.index(3) {
        0 => Volatility::Constant(rng.uniform_in(T::of(0.2), T::of(2.0))),
        1 => Volatility::NormAffine {
            base: rng.uniform_in(T::of(0.2), T::of(1.0)),
            slope: rng.uniform_in(T::zero(), T::of(0.8)),
            cap: rng.uniform_in(T::of(1.0), T::of(5.0)),
        },
        _ => Volatility::Bump {
            base: rng.uniform_in(T::of(0.1), T::of(0.8)),
            amp: rng.uniform_in(T::of(0.2), T::of(1.5)),
            scale: rng.uniform_in(T::of(0.5), T::of(3.0)),
        },
    }
}

fn random_vector<T: Real>(rng: &mut CounterRng, d: usize, scale: f64) -> Vec<T> {
    (0..d).map(|_| T::of(scale) * rng.normal()).collect()
}

fn random_first<T: Real>(rng: &mut CounterRng, d: usize, symmetric: bool) -> FirstStepLaw<T> {
    if symmetric {
        return FirstStepLaw::SymmetricTwoPoint(random_vector(rng, d, 1.0));
    }
    match rng.index(3) {
        0 => FirstStepLaw::Deterministic(random_vector(rng, d, 1.0)),
        1 => FirstStepLaw::GaussianShifted {
            mean: random_vector(rng, d, 0.8),
            sigma: rng.uniform_in(T::of(0.2), T::of(1.5)),
        },
        _ => FirstStepLaw::SymmetricTwoPoint(random_vector(rng, d, 1.0)),
    }
}

fn random_model<T: Real>(
    rng: &mut CounterRng,
    d: usize,
    force_mean: Option<Vec<T>>,
) -> RandomVectorModel<T> {
    let mean = force_mean.unwrap_or_else(|| random_vector(rng, d, 0.7));
    match rng.index(4) {
        0 => RandomVectorModel::gaussian(mean, Covariance::Identity).unwrap(),
        1 => RandomVectorModel::gaussian(
            mean,
            Covariance::Scalar(rng.uniform_in(T::of(0.2), T::of(2.0))),
        )
        .unwrap(),
        2 => RandomVectorModel::gaussian(
            mean,
            Covariance::Diagonal(
                (0..d)
                    .map(|_| rng.uniform_in(T::of(0.1), T::of(2.0)))
                    .collect(),
            ),
        )
        .unwrap(),
        _ => RandomVectorModel::point_mass(mean).unwrap(),
    }
}

/// Build and run the default randomized suite across all checks.
pub fn run_default_suite<T: Real>(
    seed: u64,
    spec_count: usize,
    paths: usize,
) -> Result<SuiteReport<T>> {
    run_suite(seed, spec_count, paths, &SuiteCheck::ALL)
}

/// Run `spec_count` randomized specs drawn from the master seed, cycling
/// through the selected checks; each spec is estimated over `paths` sample
/// paths. No check may come back violated-beyond-3-sigma.
pub fn run_suite<T: Real>(
    seed: u64,
    spec_count: usize,
    paths: usize,
    checks: &[SuiteCheck],
) -> Result<SuiteReport<T>> {
    assert!(!checks.is_empty(), "need at least one check kind");
    let mut items: Vec<SuiteItem<T>> = Vec::with_capacity(spec_count);
    for i in 0..spec_count {
        let mut rng = CounterRng::new(seed, i as u64);
        let d = 1 + rng.index(8);
        let n = 2 + rng.index(9);
        let item_seed = rng.next_u64();
        let which = checks[i % checks.len()];
        let (name, report) = match which {
            SuiteCheck::Vbe => {
                let p = rng.uniform_in(T::of(1.01), T::of(2.0));
                let spec = SequenceSpec {
                    kind: SequenceKind::VMartingale {
                        first: random_first(&mut rng, d, false),
                        volatility: random_volatility(&mut rng),
                        step: random_step(&mut rng, false, d),
                        virtual_only: false,
                    },
                    dim: d,
                    len: n,
                    seed: item_seed,
                };
                (format!("vbe[{i}] d={d} n={n}"), check_vbe(&spec, p, paths)?)
            }
            SuiteCheck::SymmetricVbe => {
                let p = rng.uniform_in(T::of(1.0), T::of(2.0));
                let spec = SequenceSpec {
                    kind: SequenceKind::SymmetricVMartingale {
                        first: random_first(&mut rng, d, true),
                        volatility: random_volatility(&mut rng),
                        step: random_step(&mut rng, true, d),
                    },
                    dim: d,
                    len: n,
                    seed: item_seed,
                };
                (
                    format!("symmetric-vbe[{i}] d={d} n={n}"),
                    check_symmetric_vbe(&spec, p, paths)?,
                )
            }
            SuiteCheck::IidDifference => {
                let p = rng.uniform_in(T::of(1.0), T::of(2.0));
                let model = random_model(&mut rng, d, None);
                (
                    format!("iid-difference[{i}] d={d}"),
                    check_iid_difference(&model, p, paths, item_seed)?,
                )
            }
            SuiteCheck::Pairwise => {
                let p = rng.uniform_in(T::of(1.0), T::of(1.95));
                let bits = 2 + rng.index(3); // 2..=4 bits -> up to 15 summands
                let max_n = (1usize << bits) - 1;
                let len = n.min(max_n);
                let directions: Vec<Vec<T>> = (0..len)
                    .map(|_| {
                        let mut v = vec![T::zero(); d];
                        rng.unit_vector(&mut v);
                        for x in v.iter_mut() {
                            *x = *x * rng.uniform_in(T::of(0.5), T::of(1.5));
                        }
                        v
                    })
                    .collect();
                let magnitude = match rng.index(3) {
                    0 => SequenceMagnitude::Unit,
                    1 => SequenceMagnitude::Uniform {
                        lo: T::of(0.5),
                        hi: T::of(1.5),
                    },
                    _ => SequenceMagnitude::HalfNormal { sigma: T::one() },
                };
                let spec = SequenceSpec {
                    kind: SequenceKind::PairwiseIndependent {
                        sign_bits: bits,
                        directions,
                        magnitude,
                    },
                    dim: d,
                    len,
                    seed: item_seed,
                };
                let symmetric = rng.random_bit();
                (
                    format!("pairwise[{i}] d={d} n={len} bits={bits}"),
                    check_pairwise(&spec, p, paths, symmetric)?,
                )
            }
            SuiteCheck::Spread => {
                let p = rng.uniform_in(T::of(0.05), T::of(4.0));
                let mean = random_vector(&mut rng, d, 0.6);
                let mx = random_model(&mut rng, d, Some(mean.clone()));
                let my = random_model(&mut rng, d, Some(mean));
                (
                    format!("spread[{i}] d={d}"),
                    check_spread(&mx, &my, p, paths, item_seed)?,
                )
            }
            SuiteCheck::TwoPoint => {
                let p = rng.uniform_in(T::of(1.0) + T::of(1e-6), T::of(2.0));
                let x = random_vector(&mut rng, d, 2.0);
                let y = random_vector(&mut rng, d, 2.0);
                (
                    format!("two-point[{i}] d={d}"),
                    check_two_point_inequality(&x, &y, p)?,
                )
            }
        };
        items.push(SuiteItem { name, report });
    }
    let violations = items
        .iter()
        .filter(|it| it.report.verdict == Verdict::ViolatedBeyond3Sigma)
        .count();
    let inconclusive = items
        .iter()
        .filter(|it| it.report.verdict == Verdict::Inconclusive)
        .count();
    Ok(SuiteReport {
        items,
        violations,
        inconclusive,
    })
}
