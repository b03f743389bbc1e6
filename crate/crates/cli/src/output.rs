//! Deterministic JSON and CSV emission.
//!
//! JSON numbers carry 17 significant digits; key order is fixed by
//! construction; the only run-dependent content is the `generated` timestamp,
//! which both formats isolate on its own line. CSV uses '.' decimals and
//! '\n' line endings regardless of locale.

use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Num(f64),
    Int(i64),
    UInt(u64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
}

impl Json {
    fn write_into(&self, out: &mut String, indent: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => {
                let _ = write!(out, "{b}");
            }
            Json::Num(x) => {
                if x.is_finite() {
                    let _ = write!(out, "{x:.16e}");
                } else {
                    // JSON has no non-finite numbers
                    out.push_str("null");
                }
            }
            Json::Int(x) => {
                let _ = write!(out, "{x}");
            }
            Json::UInt(x) => {
                let _ = write!(out, "{x}");
            }
            Json::Str(s) => write_json_string(out, s),
            Json::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(out, indent + 1);
                    item.write_into(out, indent + 1);
                }
                out.push('\n');
                push_indent(out, indent);
                out.push(']');
            }
            Json::Obj(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (i, (key, value)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(out, indent + 1);
                    write_json_string(out, key);
                    out.push_str(": ");
                    value.write_into(out, indent + 1);
                }
                out.push('\n');
                push_indent(out, indent);
                out.push('}');
            }
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write_into(&mut out, 0);
        out.push('\n');
        out
    }
}

fn push_indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_json_string(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

/// Wrap a payload in the standard envelope. The timestamp occupies its own
/// line so byte comparisons can skip it.
pub fn envelope(command: &str, seed: u64, payload: Json) -> Json {
    Json::Obj(vec![
        ("generated", Json::Str(utc_timestamp())),
        ("command", Json::Str(command.to_string())),
        ("seed", Json::UInt(seed)),
        ("payload", payload),
    ])
}

/// CSV table with a leading `# generated` comment line.
pub struct Csv {
    out: String,
}

impl Csv {
    pub fn new(columns: &[&str]) -> Self {
        let mut out = format!("# generated {}\n", utc_timestamp());
        out.push_str(&columns.join(","));
        out.push('\n');
        Csv { out }
    }

    pub fn row(&mut self, cells: &[CsvCell<'_>]) {
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                self.out.push(',');
            }
            match cell {
                CsvCell::Num(x) => {
                    if x.is_finite() {
                        let _ = write!(self.out, "{x:.16e}");
                    }
                }
                CsvCell::Int(x) => {
                    let _ = write!(self.out, "{x}");
                }
                CsvCell::Str(s) => {
                    if s.contains(',') || s.contains('"') || s.contains('\n') {
                        let _ = write!(self.out, "\"{}\"", s.replace('"', "\"\""));
                    } else {
                        self.out.push_str(s);
                    }
                }
                CsvCell::Empty => {}
            }
        }
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

pub enum CsvCell<'a> {
    Num(f64),
    Int(i64),
    Str(&'a str),
    Empty,
}

/// RFC 3339 UTC timestamp, seconds resolution, no external dependencies.
fn utc_timestamp() -> String {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs() as i64)
        .unwrap_or(0);
    let days = secs.div_euclid(86_400);
    let tod = secs.rem_euclid(86_400);
    let (h, m, s) = (tod / 3600, (tod % 3600) / 60, tod % 60);
    // days-from-civil inverse (Howard Hinnant's algorithm)
    let z = days + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = doy - (153 * mp + 2) / 5 + 1;
    let month = if mp < 10 { mp + 3 } else { mp - 9 };
    let year = if month <= 2 { y + 1 } else { y };
    format!("{year:04}-{month:02}-{d:02}T{h:02}:{m:02}:{s:02}Z")
}
