//! `figure`: the ratio of the earlier combined pairwise constant
//! K_12 = min(K_1, K_2) to the factor 4/(2-p), tabulated over a p grid.

use moment_ineq::constants::{pairwise_k1, pairwise_k2};

use crate::output::{Csv, CsvCell, Json};
use crate::CmdError;

pub struct FigureRequest {
    pub grid: Vec<f64>,
}

pub struct FigureRow {
    pub p: f64,
    pub k1: f64,
    pub k2: f64,
    pub k12: f64,
    pub bound: f64,
    pub ratio: f64,
}

pub fn rows(grid: &[f64]) -> Result<Vec<FigureRow>, CmdError> {
    if grid.is_empty() {
        return Err(CmdError::usage("empty p grid"));
    }
    if grid.iter().any(|&p| !(p > 1.0 && p < 2.0)) {
        return Err(CmdError::usage(
            "figure grid must lie strictly inside (1, 2)",
        ));
    }
    grid.iter()
        .map(|&p| {
            let k1 = pairwise_k1(p).map_err(CmdError::numeric)?.value;
            let k2 = pairwise_k2(p).map_err(CmdError::numeric)?;
            let k12 = k1.min(k2);
            let bound = 4.0 / (2.0 - p);
            Ok(FigureRow {
                p,
                k1,
                k2,
                k12,
                bound,
                ratio: k12 / bound,
            })
        })
        .collect()
}

pub fn run(req: &FigureRequest) -> Result<(Json, String), CmdError> {
    let rows = rows(&req.grid)?;
    let json_rows: Vec<Json> = rows
        .iter()
        .map(|r| {
            Json::Obj(vec![
                ("p", Json::Num(r.p)),
                ("k1", Json::Num(r.k1)),
                ("k2", Json::Num(r.k2)),
                ("k12", Json::Num(r.k12)),
                ("bound", Json::Num(r.bound)),
                ("ratio", Json::Num(r.ratio)),
            ])
        })
        .collect();
    let json = Json::Obj(vec![
        ("points", Json::UInt(rows.len() as u64)),
        ("rows", Json::Arr(json_rows)),
    ]);

    let mut csv = Csv::new(&["p", "k1", "k2", "k12", "bound", "ratio"]);
    for r in &rows {
        csv.row(&[
            CsvCell::Num(r.p),
            CsvCell::Num(r.k1),
            CsvCell::Num(r.k2),
            CsvCell::Num(r.k12),
            CsvCell::Num(r.bound),
            CsvCell::Num(r.ratio),
        ]);
    }
    Ok((json, csv.finish()))
}
