//! Flat key-value model descriptor grammar:
//!
//! ```text
//! model   := name '(' [arg (',' arg)*] ')'
//! arg     := [key '='] value
//! value   := number | name | vector | matrix | model | list-of-models
//! vector  := '[' number, ... ']'
//! matrix  := '[' vector, ... ']'
//! ```
//!
//! Examples: `gaussian(dim=3, cov=identity)`,
//! `gaussian(mean=[1,0], cov=diag([1,2]))`, `point_mass(dim=2, r=1.5)`,
//! `finite_mixture(weights=[0.3,0.7], parts=[gaussian(dim=2, cov=identity),
//! uniform_sphere(dim=2, r=1)])`.
//!
//! Parse errors carry the byte offset of the offending token.

use std::fmt;

use moment_ineq::cf_moments::{Covariance, MagnitudeLaw, RandomVectorModel};

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Number(f64),
    Ident(String),
    Vector(Vec<f64>),
    Matrix(Vec<Vec<f64>>),
    Call(Call),
    List(Vec<Value>),
}

#[derive(Debug, Clone, PartialEq)]
struct Call {
    name: String,
    name_offset: usize,
    args: Vec<(Option<String>, Value, usize)>,
}

struct Scanner<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner { src, pos: 0 }
    }

    fn error(&self, at: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            offset: at,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src.as_bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.as_bytes().get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => Err(self.error(
                self.pos,
                format!("expected '{}', found '{}'", c as char, got as char),
            )),
            None => Err(self.error(
                self.pos,
                format!("expected '{}', found end of input", c as char),
            )),
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<(String, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len()
            && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error(start, "expected an identifier"));
        }
        Ok((self.src[start..self.pos].to_string(), start))
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len()
            && matches!(
                bytes[self.pos],
                b'0'..=b'9' | b'.' | b'-' | b'+' | b'e' | b'E'
            )
        {
            self.pos += 1;
        }
        self.src[start..self.pos].parse::<f64>().map_err(|_| {
            self.error(
                start,
                format!("invalid number '{}'", &self.src[start..self.pos]),
            )
        })
    }

    fn value(&mut self) -> Result<(Value, usize), ParseError> {
        self.skip_ws();
        let at = self.pos;
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                if self.eat(b']') {
                    return Ok((Value::Vector(vec![]), at));
                }
                let (first, _) = self.value()?;
                let mut items = vec![first];
                while self.eat(b',') {
                    items.push(self.value()?.0);
                }
                self.expect(b']')?;
                // homogeneous list: numbers -> vector, vectors -> matrix,
                // anything else stays a general list
                if items.iter().all(|v| matches!(v, Value::Number(_))) {
                    let nums = items
                        .iter()
                        .map(|v| match v {
                            Value::Number(x) => *x,
                            _ => unreachable!(),
                        })
                        .collect();
                    Ok((Value::Vector(nums), at))
                } else if items.iter().all(|v| matches!(v, Value::Vector(_))) {
                    let rows = items
                        .into_iter()
                        .map(|v| match v {
                            Value::Vector(x) => x,
                            _ => unreachable!(),
                        })
                        .collect();
                    Ok((Value::Matrix(rows), at))
                } else {
                    Ok((Value::List(items), at))
                }
            }
            Some(c) if c == b'-' || c == b'+' || c.is_ascii_digit() || c == b'.' => {
                Ok((Value::Number(self.number()?), at))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let (name, name_offset) = self.ident()?;
                if self.peek() == Some(b'(') {
                    let call = self.call_args(name, name_offset)?;
                    Ok((Value::Call(call), at))
                } else {
                    Ok((Value::Ident(name), at))
                }
            }
            Some(c) => Err(self.error(at, format!("unexpected character '{}'", c as char))),
            None => Err(self.error(at, "unexpected end of input")),
        }
    }

    fn call_args(&mut self, name: String, name_offset: usize) -> Result<Call, ParseError> {
        self.expect(b'(')?;
        let mut args = Vec::new();
        if !self.eat(b')') {
            loop {
                self.skip_ws();
                let arg_at = self.pos;
                // look ahead for `key =`
                let save = self.pos;
                let key = match self.ident() {
                    Ok((k, _)) if self.eat(b'=') => Some(k),
                    _ => {
                        self.pos = save;
                        None
                    }
                };
                let (value, _) = self.value()?;
                args.push((key, value, arg_at));
                if !self.eat(b',') {
                    break;
                }
            }
            self.expect(b')')?;
        }
        Ok(Call {
            name,
            name_offset,
            args,
        })
    }
}

struct Args<'a> {
    call: &'a Call,
}

impl<'a> Args<'a> {
    fn get(&self, key: &str) -> Option<&'a Value> {
        self.call
            .args
            .iter()
            .find(|(k, _, _)| k.as_deref() == Some(key))
            .map(|(_, v, _)| v)
    }

    fn offset_of(&self, key: &str) -> usize {
        self.call
            .args
            .iter()
            .find(|(k, _, _)| k.as_deref() == Some(key))
            .map(|(_, _, at)| *at)
            .unwrap_or(self.call.name_offset)
    }

    fn err(&self, key: &str, message: impl Into<String>) -> ParseError {
        ParseError {
            offset: self.offset_of(key),
            message: message.into(),
        }
    }

    fn number(&self, key: &str) -> Result<Option<f64>, ParseError> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Number(x)) => Ok(Some(*x)),
            Some(_) => Err(self.err(key, format!("'{key}' must be a number"))),
        }
    }

    fn vector(&self, key: &str) -> Result<Option<Vec<f64>>, ParseError> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Vector(v)) => Ok(Some(v.clone())),
            Some(_) => Err(self.err(key, format!("'{key}' must be a vector like [1, 0]"))),
        }
    }

    fn reject_unknown(&self, known: &[&str]) -> Result<(), ParseError> {
        for (k, _, at) in &self.call.args {
            if let Some(k) = k {
                if !known.contains(&k.as_str()) {
                    return Err(ParseError {
                        offset: *at,
                        message: format!("unknown argument '{k}' for '{}'", self.call.name),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Either an explicit coordinate vector or (dim, r) meaning r * e_1.
fn point_from(args: &Args) -> Result<Vec<f64>, ParseError> {
    if let Some(x) = args.vector("x")? {
        if x.is_empty() {
            return Err(args.err("x", "'x' must be nonempty"));
        }
        return Ok(x);
    }
    let dim =
        args.number("dim")?
            .ok_or_else(|| args.err("dim", "need either x=[..] or dim= and r="))? as usize;
    let r = args.number("r")?.unwrap_or(1.0);
    if dim == 0 {
        return Err(args.err("dim", "dim must be at least 1"));
    }
    let mut x = vec![0.0; dim];
    x[0] = r;
    Ok(x)
}

fn build_model(call: &Call) -> Result<RandomVectorModel<f64>, ParseError> {
    let args = Args { call };
    let fail = |e: moment_ineq::Error| ParseError {
        offset: call.name_offset,
        message: format!("invalid '{}' model: {e}", call.name),
    };
    match call.name.as_str() {
        "gaussian" => {
            args.reject_unknown(&["dim", "mean", "cov"])?;
            let mean = match (args.vector("mean")?, args.number("dim")?) {
                (Some(m), _) => m,
                (None, Some(d)) => vec![0.0; d as usize],
                (None, None) => {
                    return Err(args.err("dim", "gaussian needs dim= or mean=[..]"));
                }
            };
            let cov = match args.get("cov") {
                None | Some(Value::Ident(_)) => match args.get("cov") {
                    Some(Value::Ident(name)) if name == "identity" => Covariance::Identity,
                    None => Covariance::Identity,
                    _ => {
                        return Err(args.err("cov", "unknown covariance name"));
                    }
                },
                Some(Value::Number(s)) => Covariance::Scalar(*s),
                Some(Value::Call(c)) if c.name == "scalar" => match c.args.first() {
                    Some((_, Value::Number(s), _)) => Covariance::Scalar(*s),
                    _ => return Err(args.err("cov", "scalar(...) takes one number")),
                },
                Some(Value::Call(c)) if c.name == "diag" => match c.args.first() {
                    Some((_, Value::Vector(v), _)) => Covariance::Diagonal(v.clone()),
                    _ => return Err(args.err("cov", "diag(...) takes a vector")),
                },
                Some(Value::Call(c)) if c.name == "full" => match c.args.first() {
                    Some((_, Value::Matrix(m), _)) => Covariance::Full(m.clone()),
                    _ => return Err(args.err("cov", "full(...) takes a matrix like [[1,0],[0,1]]")),
                },
                Some(Value::Matrix(m)) => Covariance::Full(m.clone()),
                Some(_) => {
                    return Err(args.err(
                        "cov",
                        "cov must be identity, scalar(s), diag([..]) or full([[..]..])",
                    ));
                }
            };
            RandomVectorModel::gaussian(mean, cov).map_err(fail)
        }
        "point_mass" => {
            args.reject_unknown(&["x", "dim", "r"])?;
            RandomVectorModel::point_mass(point_from(&args)?).map_err(fail)
        }
        "symmetric_two_point" => {
            args.reject_unknown(&["x", "dim", "r"])?;
            RandomVectorModel::symmetric_two_point(point_from(&args)?).map_err(fail)
        }
        "scaled_rademacher" => {
            args.reject_unknown(&["x", "dim", "r", "mags", "weights"])?;
            let x = point_from(&args)?;
            let magnitude = match (args.vector("mags")?, args.vector("weights")?) {
                (None, None) => MagnitudeLaw::Unit,
                (Some(mags), weights) => {
                    let weights =
                        weights.unwrap_or_else(|| vec![1.0 / mags.len() as f64; mags.len()]);
                    if weights.len() != mags.len() {
                        return Err(args.err("weights", "weights and mags must have equal length"));
                    }
                    MagnitudeLaw::Atoms(weights.into_iter().zip(mags).collect())
                }
                (None, Some(_)) => {
                    return Err(args.err("weights", "weights without mags"));
                }
            };
            RandomVectorModel::scaled_rademacher(x, magnitude).map_err(fail)
        }
        "uniform_sphere" => {
            args.reject_unknown(&["dim", "r"])?;
            let dim = args
                .number("dim")?
                .ok_or_else(|| args.err("dim", "uniform_sphere needs dim="))?
                as usize;
            let r = args.number("r")?.unwrap_or(1.0);
            RandomVectorModel::uniform_sphere(dim, r).map_err(fail)
        }
        "independent_sum" => {
            args.reject_unknown(&["parts"])?;
            let parts = model_list(&args, "parts")?;
            RandomVectorModel::independent_sum(parts).map_err(fail)
        }
        "finite_mixture" => {
            args.reject_unknown(&["weights", "parts"])?;
            let weights = args
                .vector("weights")?
                .ok_or_else(|| args.err("weights", "finite_mixture needs weights=[..]"))?;
            let parts = model_list(&args, "parts")?;
            if weights.len() != parts.len() {
                return Err(args.err("weights", "weights and parts must have equal length"));
            }
            RandomVectorModel::finite_mixture(weights.into_iter().zip(parts).collect())
                .map_err(fail)
        }
        other => Err(ParseError {
            offset: call.name_offset,
            message: format!(
                "unknown model '{other}' (expected gaussian, point_mass, symmetric_two_point, \
                 scaled_rademacher, uniform_sphere, independent_sum or finite_mixture)"
            ),
        }),
    }
}

fn model_list(args: &Args, key: &str) -> Result<Vec<RandomVectorModel<f64>>, ParseError> {
    let v = args
        .get(key)
        .ok_or_else(|| args.err(key, format!("need {key}=[model, ...]")))?;
    let items: Vec<&Value> = match v {
        Value::List(items) => items.iter().collect(),
        Value::Call(_) => vec![v],
        _ => return Err(args.err(key, format!("'{key}' must be a list of models"))),
    };
    items
        .into_iter()
        .map(|item| match item {
            Value::Call(c) => build_model(c),
            _ => Err(args.err(key, format!("'{key}' entries must be model descriptors"))),
        })
        .collect()
}

/// Parse a model descriptor.
pub fn parse_model(src: &str) -> Result<RandomVectorModel<f64>, ParseError> {
    let mut scanner = Scanner::new(src);
    let (name, name_offset) = scanner.ident()?;
    let call = scanner.call_args(name, name_offset)?;
    scanner.skip_ws();
    if scanner.pos != src.len() {
        return Err(ParseError {
            offset: scanner.pos,
            message: format!("trailing input '{}'", &src[scanner.pos..]),
        });
    }
    build_model(&call)
}

/// Parse a `lo:hi:step` grid description.
pub fn parse_grid(src: &str) -> Result<Vec<f64>, ParseError> {
    let parts: Vec<&str> = src.split(':').collect();
    if parts.len() != 3 {
        return Err(ParseError {
            offset: 0,
            message: "grid must be lo:hi:step".into(),
        });
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|s| {
            s.trim().parse::<f64>().map_err(|_| ParseError {
                offset: 0,
                message: format!("invalid grid number '{s}'"),
            })
        })
        .collect::<Result<_, _>>()?;
    let (lo, hi, step) = (nums[0], nums[1], nums[2]);
    if !(step > 0.0) || !lo.is_finite() || !hi.is_finite() || hi < lo {
        return Err(ParseError {
            offset: 0,
            message: "grid needs lo <= hi and step > 0".into(),
        });
    }
    let n = ((hi - lo) / step).round() as usize;
    let mut grid = Vec::with_capacity(n + 1);
    let mut i = 0usize;
    loop {
        let x = lo + step * i as f64;
        if x > hi + step * 1e-9 {
            break;
        }
        grid.push(x);
        i += 1;
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_gaussian_variants() {
        let m = parse_model("gaussian(dim=3, cov=identity)").unwrap();
        assert_eq!(m.dim(), 3);
        let m = parse_model("gaussian(mean=[1, 0], cov=scalar(2.0))").unwrap();
        assert_eq!(m.dim(), 2);
        let m = parse_model("gaussian(mean=[0,0], cov=full([[1, 0.5], [0.5, 2]]))").unwrap();
        assert_eq!(m.dim(), 2);
        let m = parse_model("gaussian(dim=2, cov=diag([1, 2]))").unwrap();
        assert_eq!(m.dim(), 2);
    }

    #[test]
    fn parses_nested_models() {
        let m = parse_model(
            "finite_mixture(weights=[0.3, 0.7], parts=[gaussian(dim=2, cov=identity), uniform_sphere(dim=2, r=1)])",
        )
        .unwrap();
        assert_eq!(m.dim(), 2);
        let m = parse_model(
            "independent_sum(parts=[point_mass(x=[1, 0]), symmetric_two_point(dim=2, r=0.5)])",
        )
        .unwrap();
        assert_eq!(m.dim(), 2);
    }

    #[test]
    fn error_carries_location() {
        let err = parse_model("gaussian(dim=3, cov=bogus)").unwrap_err();
        assert!(err.offset >= 16, "offset {}", err.offset);
        let err = parse_model("gaussian(dim=3,, cov=identity)").unwrap_err();
        assert_eq!(err.offset, 15);
        let err = parse_model("wat(dim=1)").unwrap_err();
        assert_eq!(err.offset, 0);
        assert!(err.to_string().contains("parse error at byte 0"));
    }

    #[test]
    fn non_psd_covariance_is_a_parse_error() {
        let err = parse_model("gaussian(mean=[0,0], cov=full([[1, 2], [2, 1]]))").unwrap_err();
        assert!(
            err.message.contains("positive semidefinite"),
            "{}",
            err.message
        );
    }

    #[test]
    fn grid_parsing() {
        let g = parse_grid("1.01:1.99:0.01").unwrap();
        assert_eq!(g.len(), 99);
        assert!((g[0] - 1.01).abs() < 1e-12);
        assert!((g[98] - 1.99).abs() < 1e-12);
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("2:1:0.1").is_err());
        assert!(parse_grid("1:2:-0.1").is_err());
        let single = parse_grid("1.5:1.5:0.01").unwrap();
        assert_eq!(single.len(), 1);
    }
}
