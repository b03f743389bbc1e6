//! `moment`: E ||X||^p for a model descriptor, by the characteristic
//! functional route, Monte Carlo, the analytic closed form, or all three
//! side by side.

use moment_ineq::cf_moments::{norm_moment_mc, norm_moment_via_cf, RandomVectorModel};
use moment_ineq::kernels::MomentOrder;
use moment_ineq::quadrature::QuadratureConfig;

use crate::output::{Csv, CsvCell, Json};
use crate::CmdError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Cf,
    Mc,
    Analytic,
    All,
}

impl Method {
    pub fn parse(s: &str) -> Result<Self, CmdError> {
        match s {
            "cf" => Ok(Method::Cf),
            "mc" => Ok(Method::Mc),
            "analytic" => Ok(Method::Analytic),
            "all" => Ok(Method::All),
            other => Err(CmdError::usage(format!(
                "unknown method '{other}' (expected cf, mc, analytic or all)"
            ))),
        }
    }
}

pub struct MomentRequest {
    pub model: RandomVectorModel<f64>,
    pub descriptor: String,
    pub p: f64,
    pub method: Method,
    pub samples: usize,
    pub seed: u64,
}

pub fn run(req: &MomentRequest) -> Result<(Json, String), CmdError> {
    if !(req.p > 0.0) || !req.p.is_finite() {
        return Err(CmdError::usage("--p must be a positive finite number"));
    }
    let order = MomentOrder::new(req.p).expect("validated above");
    let wants = |m: Method| req.method == m || req.method == Method::All;

    let mut cf_entry = Json::Null;
    let mut cf_value = None;
    if wants(Method::Cf) {
        if order.is_even_integer() {
            if req.method == Method::Cf {
                return Err(CmdError::usage(
                    "the cf route is undefined at even integer p; use --method mc or analytic",
                ));
            }
            cf_entry = Json::Obj(vec![("undefined", Json::Str("even integer p".into()))]);
        } else {
            let cfg = QuadratureConfig::<f64>::cf_moments().with_seed(req.seed);
            let est = norm_moment_via_cf(&req.model, &order, &cfg).map_err(CmdError::numeric)?;
            if !est.converged && est.std_error.is_none() {
                return Err(CmdError::Tolerance(format!(
                    "cf quadrature did not reach tolerance (bound {:e})",
                    est.error_bound
                )));
            }
            cf_value = Some(est.value);
            let mut obj = vec![
                ("value", Json::Num(est.value)),
                ("error_bound", Json::Num(est.error_bound)),
            ];
            if let Some(se) = est.std_error {
                obj.push(("sphere_std_error", Json::Num(se)));
            }
            obj.push(("evaluations", Json::UInt(est.evaluations as u64)));
            cf_entry = Json::Obj(obj);
        }
    }

    let mut mc_entry = Json::Null;
    let mut mc_value = None;
    if wants(Method::Mc) {
        let est =
            norm_moment_mc(&req.model, req.p, req.samples, req.seed).map_err(CmdError::numeric)?;
        mc_value = Some(est.value);
        mc_entry = Json::Obj(vec![
            ("value", Json::Num(est.value)),
            ("std_error", Json::Num(est.std_error)),
            ("samples", Json::UInt(est.samples as u64)),
        ]);
    }

    let mut analytic_entry = Json::Null;
    let analytic_value = req.model.analytic_norm_moment(req.p);
    if wants(Method::Analytic) {
        analytic_entry = match analytic_value {
            Some(v) => Json::Obj(vec![("value", Json::Num(v))]),
            // absent is reported, not an error
            None => Json::Obj(vec![(
                "absent",
                Json::Str("no closed form for this model".into()),
            )]),
        };
    }

    let mut deviations = Vec::new();
    if req.method == Method::All {
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
        if let (Some(cf), Some(mc)) = (cf_value, mc_value) {
            deviations.push(("cf_vs_mc", Json::Num(rel(cf, mc))));
        }
        if let (Some(cf), Some(an)) = (cf_value, analytic_value) {
            deviations.push(("cf_vs_analytic", Json::Num(rel(cf, an))));
        }
        if let (Some(mc), Some(an)) = (mc_value, analytic_value) {
            deviations.push(("mc_vs_analytic", Json::Num(rel(mc, an))));
        }
    }

    let json = Json::Obj(vec![
        ("model", Json::Str(req.descriptor.clone())),
        ("p", Json::Num(req.p)),
        ("cf", cf_entry),
        ("mc", mc_entry),
        ("analytic", analytic_entry),
        ("deviations", Json::Obj(deviations)),
    ]);

    let mut csv = Csv::new(&["method", "value", "error", "note"]);
    if let Some(v) = cf_value {
        csv.row(&[
            CsvCell::Str("cf"),
            CsvCell::Num(v),
            CsvCell::Empty,
            CsvCell::Empty,
        ]);
    }
    if let Some(v) = mc_value {
        csv.row(&[
            CsvCell::Str("mc"),
            CsvCell::Num(v),
            CsvCell::Empty,
            CsvCell::Empty,
        ]);
    }
    match (wants(Method::Analytic), analytic_value) {
        (true, Some(v)) => csv.row(&[
            CsvCell::Str("analytic"),
            CsvCell::Num(v),
            CsvCell::Empty,
            CsvCell::Empty,
        ]),
        (true, None) => csv.row(&[
            CsvCell::Str("analytic"),
            CsvCell::Empty,
            CsvCell::Empty,
            CsvCell::Str("absent"),
        ]),
        _ => {}
    }
    Ok((json, csv.finish()))
}
