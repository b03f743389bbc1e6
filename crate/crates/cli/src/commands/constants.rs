//! `constants`: the full table of named constants at a given (p, d).

use moment_ineq::constants::{
    bahr_kernel_constant, best_vbe_constant, kappa, pairwise_k1, pairwise_k2, radial_constant,
};
use moment_ineq::kernels::{sphere_pth_moment, sphere_surface_area, MomentOrder};
use moment_ineq::quadrature::QuadratureConfig;

use crate::output::{Csv, CsvCell, Json};
use crate::CmdError;

pub struct ConstantsRequest {
    pub p: f64,
    pub d: usize,
}

/// One table entry: either a value (with an optional secondary quantity such
/// as the extremizer), a documented limit, or an explanation of why it is
/// undefined here.
enum Entry {
    Value {
        value: f64,
        aux: Vec<(&'static str, f64)>,
        flag: Option<bool>,
    },
    Limit {
        value: f64,
        note: &'static str,
    },
    Undefined(&'static str),
}

fn undef_even() -> Entry {
    Entry::Undefined("undefined: even integer p")
}

pub fn run(req: &ConstantsRequest) -> Result<(Json, String), CmdError> {
    if !(req.p > 0.0) || !req.p.is_finite() {
        return Err(CmdError::usage("--p must be a positive finite number"));
    }
    if req.d == 0 {
        return Err(CmdError::usage("--d must be at least 1"));
    }
    let order = MomentOrder::new(req.p).expect("validated above");
    let cfg = QuadratureConfig::<f64>::closed_form();

    let mut entries: Vec<(&'static str, Entry)> = Vec::new();

    entries.push((
        "C_p",
        if req.p > 1.0 && req.p <= 2.0 {
            let c = best_vbe_constant(req.p).map_err(CmdError::numeric)?;
            Entry::Value {
                value: c.value,
                aux: vec![("maximizer", c.argmax_or_argmin)],
                flag: None,
            }
        } else if req.p == 1.0 {
            // defining optimization lives on (1, 2]; the one-sided limit is 2
            Entry::Limit {
                value: 2.0,
                note: "documented limit as p -> 1+",
            }
        } else {
            Entry::Undefined("undefined: C_p needs p in (1, 2]")
        },
    ));
    entries.push((
        "kappa_p",
        if req.p > 1.0 && req.p <= 2.0 {
            let k = kappa(req.p).map_err(CmdError::numeric)?;
            Entry::Value {
                value: k.value,
                aux: vec![("maximizer", k.argmax_or_argmin)],
                flag: None,
            }
        } else if req.p == 1.0 {
            Entry::Limit {
                value: 2.0,
                note: "documented limit as p -> 1+",
            }
        } else {
            Entry::Undefined("undefined: kappa_p needs p in (1, 2]")
        },
    ));
    entries.push((
        "K_p",
        if order.is_even_integer() {
            undef_even()
        } else {
            let k = bahr_kernel_constant(&order).map_err(CmdError::numeric)?;
            Entry::Value {
                value: k,
                aux: vec![],
                flag: None,
            }
        },
    ));
    entries.push((
        "C_dp",
        if order.is_even_integer() {
            undef_even()
        } else {
            let r = radial_constant(req.d, &order, &cfg).map_err(CmdError::numeric)?;
            let mut aux = vec![("alt_convention", r.alt_value)];
            if let Some(o) = r.oracle_value {
                aux.push(("oracle", o));
            }
            Entry::Value {
                value: r.canonical_value,
                aux,
                flag: Some(r.discrepancy_flag),
            }
        },
    ));
    entries.push((
        "c_p_mu",
        Entry::Value {
            value: sphere_pth_moment(req.d, req.p).map_err(CmdError::numeric)?,
            aux: vec![(
                "surface_area",
                sphere_surface_area::<f64>(req.d)
                    .map_err(CmdError::numeric)?
                    .canonical,
            )],
            flag: None,
        },
    ));
    entries.push((
        "K_1",
        if (1.0..2.0).contains(&req.p) {
            let k = pairwise_k1(req.p).map_err(CmdError::numeric)?;
            Entry::Value {
                value: k.value,
                aux: vec![("minimizer", k.argmax_or_argmin)],
                flag: None,
            }
        } else {
            Entry::Undefined("undefined: K_1 needs p in [1, 2)")
        },
    ));
    entries.push((
        "K_2",
        if req.p > 1.0 && req.p < 2.0 {
            Entry::Value {
                value: pairwise_k2(req.p).map_err(CmdError::numeric)?,
                aux: vec![],
                flag: None,
            }
        } else {
            Entry::Undefined("undefined: K_2 needs p in (1, 2)")
        },
    ));
    entries.push((
        "pairwise_ratio",
        if req.p > 1.0 && req.p < 2.0 {
            let k1 = pairwise_k1(req.p).map_err(CmdError::numeric)?.value;
            let k2 = pairwise_k2(req.p).map_err(CmdError::numeric)?;
            let bound = 4.0 / (2.0 - req.p);
            Entry::Value {
                value: k1.min(k2) / bound,
                aux: vec![("bound_4_over_2mp", bound)],
                flag: None,
            }
        } else {
            Entry::Undefined("undefined: ratio needs p in (1, 2)")
        },
    ));

    // JSON payload
    let mut fields = vec![("p", Json::Num(req.p)), ("d", Json::UInt(req.d as u64))];
    let mut table = Vec::new();
    for (name, entry) in &entries {
        let body = match entry {
            Entry::Value { value, aux, flag } => {
                let mut obj = vec![("value", Json::Num(*value))];
                for (k, v) in aux {
                    obj.push((k, Json::Num(*v)));
                }
                if let Some(flag) = flag {
                    obj.push(("discrepancy_flag", Json::Bool(*flag)));
                }
                Json::Obj(obj)
            }
            Entry::Limit { value, note } => Json::Obj(vec![
                ("value", Json::Num(*value)),
                ("note", Json::Str(note.to_string())),
            ]),
            Entry::Undefined(reason) => {
                Json::Obj(vec![("undefined", Json::Str(reason.to_string()))])
            }
        };
        table.push((*name, body));
    }
    fields.push(("constants", Json::Obj(table)));
    let json = Json::Obj(fields);

    // CSV payload
    let mut csv = Csv::new(&["name", "value", "aux_name", "aux_value", "note"]);
    for (name, entry) in &entries {
        match entry {
            Entry::Value { value, aux, flag } => {
                let (aux_name, aux_value) = aux
                    .first()
                    .map(|(k, v)| (*k, CsvCell::Num(*v)))
                    .unwrap_or(("", CsvCell::Empty));
                let note = match flag {
                    Some(true) => "discrepancy_flag=true",
                    Some(false) => "discrepancy_flag=false",
                    None => "",
                };
                csv.row(&[
                    CsvCell::Str(name),
                    CsvCell::Num(*value),
                    CsvCell::Str(aux_name),
                    aux_value,
                    CsvCell::Str(note),
                ]);
            }
            Entry::Limit { value, note } => {
                csv.row(&[
                    CsvCell::Str(name),
                    CsvCell::Num(*value),
                    CsvCell::Empty,
                    CsvCell::Empty,
                    CsvCell::Str(note),
                ]);
            }
            Entry::Undefined(reason) => {
                csv.row(&[
                    CsvCell::Str(name),
                    CsvCell::Empty,
                    CsvCell::Empty,
                    CsvCell::Empty,
                    CsvCell::Str(reason),
                ]);
            }
        }
    }
    Ok((json, csv.finish()))
}
