//! `verify`: seeded statistical verification suites with per-check verdicts
//! and a CI-friendly exit status.

use moment_ineq::cf_moments::RandomVectorModel;
use moment_ineq::constants::best_vbe_constant;
use moment_ineq::lab::{
    check_iid_difference, check_spread, check_two_point_inequality, cross_dimension_consistency,
    run_suite, tightness_search, FirstStepLaw, InequalityReport, InequalityTemplate, SequenceKind,
    SequenceSpec, StepLaw, SuiteCheck, Verdict, Volatility,
};
use moment_ineq::rng::CounterRng;

use crate::output::{Csv, CsvCell, Json};
use crate::CmdError;

pub const CHECK_NAMES: [&str; 8] = [
    "vbe",
    "symmetric-vbe",
    "two-point",
    "iid-diff",
    "pairwise",
    "spread",
    "cross-dim",
    "tightness",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckSelect {
    Vbe,
    SymmetricVbe,
    TwoPoint,
    IidDiff,
    Pairwise,
    Spread,
    CrossDim,
    Tightness,
}

impl CheckSelect {
    pub fn parse_list(s: &str) -> Result<Vec<CheckSelect>, CmdError> {
        s.split(',')
            .map(|item| match item.trim() {
                "vbe" => Ok(CheckSelect::Vbe),
                "symmetric-vbe" => Ok(CheckSelect::SymmetricVbe),
                "two-point" => Ok(CheckSelect::TwoPoint),
                "iid-diff" => Ok(CheckSelect::IidDiff),
                "pairwise" => Ok(CheckSelect::Pairwise),
                "spread" => Ok(CheckSelect::Spread),
                "cross-dim" => Ok(CheckSelect::CrossDim),
                "tightness" => Ok(CheckSelect::Tightness),
                other => Err(CmdError::usage(format!(
                    "unknown check '{other}' (expected one of {})",
                    CHECK_NAMES.join(", ")
                ))),
            })
            .collect()
    }

    fn suite_kind(self) -> Option<SuiteCheck> {
        match self {
            CheckSelect::Vbe => Some(SuiteCheck::Vbe),
            CheckSelect::SymmetricVbe => Some(SuiteCheck::SymmetricVbe),
            CheckSelect::TwoPoint => Some(SuiteCheck::TwoPoint),
            CheckSelect::IidDiff => Some(SuiteCheck::IidDifference),
            CheckSelect::Pairwise => Some(SuiteCheck::Pairwise),
            CheckSelect::Spread => Some(SuiteCheck::Spread),
            CheckSelect::CrossDim | CheckSelect::Tightness => None,
        }
    }
}

pub struct VerifyRequest {
    pub checks: Vec<CheckSelect>,
    pub p: Option<f64>,
    pub samples: usize,
    pub specs: usize,
    pub seed: u64,
    pub two_point_trials: usize,
    /// Optional user model: the model-driven checks (iid-diff, spread) run
    /// on it in addition to the randomized suite.
    pub model: Option<(String, RandomVectorModel<f64>)>,
}

pub struct VerifyOutcome {
    pub json: Json,
    pub csv: String,
    pub exit_code: i32,
}

fn report_json(name: &str, r: &InequalityReport<f64>) -> Json {
    Json::Obj(vec![
        ("name", Json::Str(name.to_string())),
        ("check", Json::Str(r.metadata.label.clone())),
        ("verdict", Json::Str(r.verdict.as_str().to_string())),
        ("lhs", Json::Num(r.lhs_estimate)),
        ("rhs", Json::Num(r.rhs_estimate)),
        ("slack", Json::Num(r.slack)),
        ("combined_stderr", Json::Num(r.combined_stderr)),
        ("constant", Json::Num(r.metadata.constant)),
        ("p", Json::Num(r.metadata.p)),
        ("d", Json::UInt(r.metadata.d as u64)),
        ("n", Json::UInt(r.metadata.n as u64)),
        ("samples", Json::UInt(r.metadata.samples as u64)),
    ])
}

pub fn run(req: &VerifyRequest) -> Result<VerifyOutcome, CmdError> {
    if req.samples < 2 {
        return Err(CmdError::usage("--samples must be at least 2"));
    }
    let mut check_rows: Vec<(String, Json)> = Vec::new();
    let mut csv = Csv::new(&["kind", "name", "verdict", "lhs", "rhs", "slack", "stderr"]);
    let mut violations = 0usize;
    let mut inconclusive = 0usize;
    let mut items_json = Vec::new();

    // randomized statistical suite over the selected check kinds
    let suite_kinds: Vec<SuiteCheck> = req.checks.iter().filter_map(|c| c.suite_kind()).collect();
    if !suite_kinds.is_empty() {
        let report = run_suite::<f64>(req.seed, req.specs, req.samples, &suite_kinds)
            .map_err(CmdError::numeric)?;
        violations += report.violations;
        inconclusive += report.inconclusive;
        for item in &report.items {
            csv.row(&[
                CsvCell::Str("suite"),
                CsvCell::Str(&item.name),
                CsvCell::Str(item.report.verdict.as_str()),
                CsvCell::Num(item.report.lhs_estimate),
                CsvCell::Num(item.report.rhs_estimate),
                CsvCell::Num(item.report.slack),
                CsvCell::Num(item.report.combined_stderr),
            ]);
            items_json.push(report_json(&item.name, &item.report));
        }
        check_rows.push((
            "suite".into(),
            Json::Obj(vec![
                ("specs", Json::UInt(report.items.len() as u64)),
                ("violations", Json::UInt(report.violations as u64)),
                ("inconclusive", Json::UInt(report.inconclusive as u64)),
            ]),
        ));
    }

    // model-driven checks on a user-supplied descriptor
    if let Some((descriptor, model)) = &req.model {
        let p = req.p.unwrap_or(1.5);
        let mut extra: Vec<(String, InequalityReport<f64>)> = Vec::new();
        if req.checks.contains(&CheckSelect::IidDiff) {
            let r = check_iid_difference(model, p.clamp(1.0, 2.0), req.samples, req.seed ^ 0x11D)
                .map_err(CmdError::numeric)?;
            extra.push((format!("model/iid-diff {descriptor}"), r));
        }
        if req.checks.contains(&CheckSelect::Spread) {
            for &sp in &[p.min(2.0), 3.0] {
                let r = check_spread(model, model, sp, req.samples, req.seed ^ 0x59D)
                    .map_err(CmdError::numeric)?;
                extra.push((format!("model/spread p={sp} {descriptor}"), r));
            }
        }
        for (name, r) in &extra {
            match r.verdict {
                Verdict::ViolatedBeyond3Sigma => violations += 1,
                Verdict::Inconclusive => inconclusive += 1,
                Verdict::Holds => {}
            }
            csv.row(&[
                CsvCell::Str("model"),
                CsvCell::Str(name),
                CsvCell::Str(r.verdict.as_str()),
                CsvCell::Num(r.lhs_estimate),
                CsvCell::Num(r.rhs_estimate),
                CsvCell::Num(r.slack),
                CsvCell::Num(r.combined_stderr),
            ]);
            items_json.push(report_json(name, r));
        }
    }

    // exhaustive exact two-point sweep
    if req.checks.contains(&CheckSelect::TwoPoint) {
        let mut rng = CounterRng::new(req.seed ^ 0x7730, 0);
        let mut sweep_violations = 0usize;
        for _ in 0..req.two_point_trials {
            let d = 1 + rng.index(6);
            let p = rng.uniform_in(1.0 + 1e-9, 2.0);
            let x: Vec<f64> = (0..d).map(|_| 3.0 * rng.normal::<f64>()).collect();
            let y: Vec<f64> = (0..d).map(|_| 3.0 * rng.normal::<f64>()).collect();
            let r = check_two_point_inequality(&x, &y, p).map_err(CmdError::numeric)?;
            if r.verdict == Verdict::ViolatedBeyond3Sigma {
                sweep_violations += 1;
            }
        }
        violations += sweep_violations;
        let verdict = if sweep_violations == 0 {
            "holds"
        } else {
            "violated-beyond-3-sigma"
        };
        csv.row(&[
            CsvCell::Str("two-point-sweep"),
            CsvCell::Str("exact"),
            CsvCell::Str(verdict),
            CsvCell::Int(req.two_point_trials as i64),
            CsvCell::Int(sweep_violations as i64),
            CsvCell::Empty,
            CsvCell::Empty,
        ]);
        check_rows.push((
            "two_point_sweep".into(),
            Json::Obj(vec![
                ("trials", Json::UInt(req.two_point_trials as u64)),
                ("violations", Json::UInt(sweep_violations as u64)),
            ]),
        ));
    }

    // transfer of scalar templates into higher dimensions
    if req.checks.contains(&CheckSelect::CrossDim) {
        let p = req.p.unwrap_or(1.5);
        let n = 5usize;
        let c_p = best_vbe_constant(p).map_err(CmdError::numeric)?.value;
        let paths = (req.samples / 5).max(1000);
        let runs: Vec<(&str, InequalityTemplate<f64>, SequenceSpec<f64>, Vec<usize>)> = vec![
            (
                "vbe",
                InequalityTemplate::vbe(n, c_p),
                SequenceSpec {
                    kind: SequenceKind::VMartingale {
                        first: FirstStepLaw::GaussianShifted {
                            mean: vec![0.5],
                            sigma: 1.0,
                        },
                        volatility: Volatility::NormAffine {
                            base: 0.6,
                            slope: 0.3,
                            cap: 2.0,
                        },
                        step: StepLaw::SkewTwoPointAxis {
                            axis: 0,
                            up: 1.0,
                            down: 0.5,
                        },
                        virtual_only: false,
                    },
                    dim: 1,
                    len: n,
                    seed: req.seed ^ 0xCD01,
                },
                vec![2, 4, 8],
            ),
            (
                "symmetric-vbe",
                InequalityTemplate::symmetric_vbe(n),
                SequenceSpec {
                    kind: SequenceKind::SymmetricVMartingale {
                        first: FirstStepLaw::SymmetricTwoPoint(vec![1.0]),
                        volatility: Volatility::Bump {
                            base: 0.5,
                            amp: 0.8,
                            scale: 1.5,
                        },
                        step: StepLaw::RademacherAxis(0),
                    },
                    dim: 1,
                    len: n,
                    seed: req.seed ^ 0xCD02,
                },
                vec![2, 4, 8],
            ),
            (
                "iid-diff",
                InequalityTemplate::iid_difference(),
                SequenceSpec {
                    kind: SequenceKind::IidPair {
                        model: moment_ineq::cf_moments::RandomVectorModel::gaussian(
                            vec![0.7],
                            moment_ineq::cf_moments::Covariance::Scalar(0.8),
                        )
                        .map_err(CmdError::numeric)?,
                    },
                    dim: 1,
                    len: 2,
                    seed: req.seed ^ 0xCD03,
                },
                vec![16],
            ),
        ];
        let mut cross_rows = Vec::new();
        for (name, template, base, dims) in &runs {
            let summary = cross_dimension_consistency(template, base, p, dims, paths)
                .map_err(CmdError::numeric)?;
            for (dim, r) in &summary.per_dim {
                if r.verdict == Verdict::ViolatedBeyond3Sigma {
                    violations += 1;
                } else if r.verdict == Verdict::Inconclusive {
                    inconclusive += 1;
                }
                csv.row(&[
                    CsvCell::Str("cross-dim"),
                    CsvCell::Str(&format!("{name} d={dim}")),
                    CsvCell::Str(r.verdict.as_str()),
                    CsvCell::Empty,
                    CsvCell::Empty,
                    CsvCell::Num(r.slack),
                    CsvCell::Num(r.combined_stderr),
                ]);
                cross_rows.push(Json::Obj(vec![
                    ("template", Json::Str(name.to_string())),
                    ("d", Json::UInt(*dim as u64)),
                    ("verdict", Json::Str(r.verdict.as_str().to_string())),
                    ("slack", Json::Num(r.slack)),
                    ("stderr", Json::Num(r.combined_stderr)),
                ]));
            }
        }
        check_rows.push(("cross_dim".into(), Json::Arr(cross_rows)));
    }

    // tightness of the sharp constant
    let mut tightness_ok = true;
    if req.checks.contains(&CheckSelect::Tightness) {
        let targets: Vec<f64> = match req.p {
            Some(p) => vec![p],
            None => vec![1.2, 1.5, 1.8],
        };
        let mut rows = Vec::new();
        for &p in &targets {
            let t = tightness_search(p, 256).map_err(CmdError::numeric)?;
            let met = t.attainment >= 0.95 && t.best_ratio <= t.sharp_constant + 1e-9;
            tightness_ok &= met;
            csv.row(&[
                CsvCell::Str("tightness"),
                CsvCell::Str(&format!("p={p}")),
                CsvCell::Str(if met { "holds" } else { "below-target" }),
                CsvCell::Num(t.best_ratio),
                CsvCell::Num(t.sharp_constant),
                CsvCell::Num(t.attainment),
                CsvCell::Empty,
            ]);
            rows.push(Json::Obj(vec![
                ("p", Json::Num(p)),
                ("best_ratio", Json::Num(t.best_ratio)),
                ("sharp_constant", Json::Num(t.sharp_constant)),
                ("attainment", Json::Num(t.attainment)),
                ("witness_x1", Json::Num(t.witness.x1)),
                ("witness_up", Json::Num(t.witness.up)),
                ("witness_down", Json::Num(t.witness.down)),
                ("target_met", Json::Bool(met)),
            ]));
        }
        check_rows.push(("tightness".into(), Json::Arr(rows)));
    }

    let exit_code = if violations == 0 && tightness_ok {
        0
    } else {
        1
    };
    let mut payload = vec![
        ("samples", Json::UInt(req.samples as u64)),
        ("specs", Json::UInt(req.specs as u64)),
    ];
    for (name, body) in check_rows {
        payload.push(match name.as_str() {
            "suite" => ("suite", body),
            "two_point_sweep" => ("two_point_sweep", body),
            "cross_dim" => ("cross_dim", body),
            _ => ("tightness", body),
        });
    }
    payload.push(("items", Json::Arr(items_json)));
    payload.push((
        "summary",
        Json::Obj(vec![
            ("violations", Json::UInt(violations as u64)),
            ("inconclusive", Json::UInt(inconclusive as u64)),
            ("tightness_ok", Json::Bool(tightness_ok)),
            ("exit_code", Json::Int(exit_code as i64)),
        ]),
    ));
    Ok(VerifyOutcome {
        json: Json::Obj(payload),
        csv: csv.finish(),
        exit_code,
    })
}
