//! Seeded stochastic verification of the moment inequalities, plus the
//! empirical tightness probe of the sharp constant.

mod checks;
mod sequences;
mod suite;
mod tightness;
mod transfer;

pub use checks::{
    check_iid_difference, check_pairwise, check_spread, check_symmetric_vbe,
    check_two_point_inequality, check_vbe,
};
pub use sequences::{
    FirstStepLaw, SequenceKind, SequenceMagnitude, SequenceSpec, StepLaw, Volatility,
};
pub use suite::{run_default_suite, run_suite, SuiteCheck, SuiteItem, SuiteReport};
pub use tightness::{tightness_search, two_step_ratio, TightnessResult, TwoStepWitness};
pub use transfer::{cross_dimension_consistency, InequalityTemplate, TransferSummary};

use crate::real::Real;

/// Outcome of a statistical check at the 3-sigma policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// slack < -3 * combined standard error.
    ViolatedBeyond3Sigma,
    /// negative slack within the noise band.
    Inconclusive,
}

impl Verdict {
    pub fn from_slack<T: Real>(slack: T, combined_stderr: T) -> Self {
        if slack < -T::of(3.0) * combined_stderr {
            Verdict::ViolatedBeyond3Sigma
        } else if slack < T::zero() {
            Verdict::Inconclusive
        } else {
            Verdict::Holds
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::ViolatedBeyond3Sigma => "violated-beyond-3-sigma",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Run parameters and any extra named quantities a check wants to surface.
#[derive(Debug, Clone)]
pub struct CheckMetadata<T> {
    pub label: String,
    /// Constant factor applied on the right-hand side.
    pub constant: T,
    pub p: T,
    pub d: usize,
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
    pub extras: Vec<(&'static str, T)>,
}

/// Two-sided moment estimates with standard errors and the verdict.
#[derive(Debug, Clone)]
pub struct InequalityReport<T> {
    pub lhs_estimate: T,
    pub rhs_estimate: T,
    pub lhs_stderr: T,
    pub rhs_stderr: T,
    /// rhs - lhs, estimated on shared sample paths.
    pub slack: T,
    pub combined_stderr: T,
    pub verdict: Verdict,
    pub metadata: CheckMetadata<T>,
}
