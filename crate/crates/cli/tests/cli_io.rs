//! End-to-end behavior of the binary: determinism, formats, exit codes,
//! parse-error locations, and schema conformance of the JSON output.

use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_moment-ineq"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

/// Strip the timestamp header line so byte comparisons see only the payload.
fn strip_timestamp(text: &str) -> String {
    text.lines()
        .filter(|line| !line.contains("\"generated\"") && !line.starts_with("# generated"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn identical_configs_are_byte_identical_modulo_timestamp() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["constants", "--p", "1.5", "--d", "2"],
        vec!["constants", "--p", "1.5", "--d", "2", "--format", "csv"],
        vec!["figure", "--p-grid", "1.2:1.8:0.1", "--format", "csv"],
        vec![
            "moment",
            "--model",
            "gaussian(dim=2, cov=identity)",
            "--p",
            "1.3",
            "--method",
            "all",
            "--samples",
            "20000",
            "--seed",
            "42",
        ],
        vec![
            "verify",
            "--check",
            "vbe,two-point",
            "--samples",
            "2000",
            "--specs",
            "6",
            "--two-point-trials",
            "1000",
            "--seed",
            "7",
        ],
    ];
    for args in cases {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(
            strip_timestamp(&stdout(&a)),
            strip_timestamp(&stdout(&b)),
            "non-deterministic output for {args:?}"
        );
    }
}

#[test]
fn different_seed_changes_statistical_output_only() {
    let base = [
        "verify",
        "--check",
        "vbe",
        "--samples",
        "2000",
        "--specs",
        "4",
    ];
    let a = run(&[&base[..], &["--seed", "1"]].concat());
    let b = run(&[&base[..], &["--seed", "2"]].concat());
    assert_ne!(strip_timestamp(&stdout(&a)), strip_timestamp(&stdout(&b)));
    // but closed-form tables ignore the seed entirely
    let a = run(&[
        "figure",
        "--p-grid",
        "1.5:1.5:0.1",
        "--format",
        "csv",
        "--seed",
        "1",
    ]);
    let b = run(&[
        "figure",
        "--p-grid",
        "1.5:1.5:0.1",
        "--format",
        "csv",
        "--seed",
        "2",
    ]);
    assert_eq!(strip_timestamp(&stdout(&a)), strip_timestamp(&stdout(&b)));
}

#[test]
fn exit_codes() {
    // 0: success
    assert_eq!(run(&["constants", "--p", "1.5"]).status.code(), Some(0));
    // 2: usage
    assert_eq!(run(&["constants", "--p", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["constants"]).status.code(), Some(2)); // missing --p (clap)
    assert_eq!(
        run(&["figure", "--p-grid", "0.5:0.9:0.1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["figure", "--p-grid", "nonsense"]).status.code(),
        Some(2)
    );
    let bad_model = run(&[
        "moment",
        "--model",
        "gaussian(dim=2, cov=bogus)",
        "--p",
        "1.0",
    ]);
    assert_eq!(bad_model.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&bad_model.stderr).to_string();
    assert!(msg.contains("parse error at byte"), "stderr: {msg}");
    // cf route rejects even integer p outright
    let even = run(&[
        "moment",
        "--model",
        "point_mass(dim=1, r=2)",
        "--p",
        "2",
        "--method",
        "cf",
    ]);
    assert_eq!(even.status.code(), Some(2));
    // unknown check name
    assert_eq!(run(&["verify", "--check", "wat"]).status.code(), Some(2));
}

#[test]
fn verify_small_run_exits_zero() {
    let out = run(&[
        "verify",
        "--check",
        "two-point,tightness",
        "--p",
        "1.5",
        "--samples",
        "2000",
        "--specs",
        "4",
        "--two-point-trials",
        "2000",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(v["payload"]["summary"]["violations"], 0);
    assert_eq!(v["payload"]["summary"]["tightness_ok"], true);
}

#[test]
fn moment_point_mass_exact() {
    let out = run(&[
        "moment",
        "--model",
        "point_mass(dim=2, r=2)",
        "--p",
        "0.7",
        "--method",
        "cf",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let got = v["payload"]["cf"]["value"].as_f64().unwrap();
    assert!((got - 2.0f64.powf(0.7)).abs() < 1e-3 * 2.0f64.powf(0.7));
}

#[test]
fn constants_even_p_flags_fields_without_failing() {
    let out = run(&["constants", "--p", "2", "--d", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let consts = &v["payload"]["constants"];
    assert!((consts["C_p"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((consts["kappa_p"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!(consts["K_p"]["undefined"]
        .as_str()
        .unwrap()
        .contains("even integer"));
    assert!(consts["C_dp"]["undefined"].is_string());
}

#[test]
fn constants_p1_d1_closed_forms() {
    let out = run(&["constants", "--p", "1", "--d", "1"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let consts = &v["payload"]["constants"];
    let k_p = consts["K_p"]["value"].as_f64().unwrap();
    assert!((k_p + std::f64::consts::PI / 2.0).abs() < 1e-12);
    let c11 = consts["C_dp"]["value"].as_f64().unwrap();
    assert!((c11 + std::f64::consts::PI).abs() < 1e-10);
    assert_eq!(consts["C_dp"]["discrepancy_flag"], false);
}

#[test]
fn csv_headers_are_stable() {
    let cases = [
        (
            vec!["constants", "--p", "1.5", "--format", "csv"],
            "name,value,aux_name,aux_value,note",
        ),
        (
            vec!["figure", "--p-grid", "1.5:1.5:0.1", "--format", "csv"],
            "p,k1,k2,k12,bound,ratio",
        ),
        (
            vec![
                "moment",
                "--model",
                "point_mass(dim=1, r=1)",
                "--p",
                "1.3",
                "--format",
                "csv",
                "--method",
                "analytic",
            ],
            "method,value,error,note",
        ),
        (
            vec![
                "verify",
                "--check",
                "two-point",
                "--samples",
                "100",
                "--specs",
                "2",
                "--two-point-trials",
                "100",
                "--format",
                "csv",
            ],
            "kind,name,verdict,lhs,rhs,slack,stderr",
        ),
    ];
    for (args, want_header) in cases {
        let out = stdout(&run(&args));
        let header = out.lines().nth(1).unwrap_or_default().to_string();
        assert_eq!(header, want_header, "args {args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("moment_ineq_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("constants.json");
    let out = run(&["constants", "--p", "1.5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["command"], "constants");
}

// ---- JSON schema conformance -------------------------------------------

/// Minimal validator for the subset of JSON Schema the shipped file uses:
/// type, enum, const, required, properties, additionalProperties, items,
/// oneOf.
fn validate(schema: &Value, value: &Value, path: &str, errors: &mut Vec<String>) {
    if let Some(t) = schema.get("type") {
        let ok = match t {
            Value::String(name) => type_matches(name, value),
            Value::Array(names) => names
                .iter()
                .any(|n| n.as_str().map(|s| type_matches(s, value)).unwrap_or(false)),
            _ => true,
        };
        if !ok {
            errors.push(format!("{path}: type mismatch (wanted {t}, got {value})"));
            return;
        }
    }
    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(value) {
            errors.push(format!("{path}: {value} not in enum"));
        }
    }
    if let Some(c) = schema.get("const") {
        if c != value {
            errors.push(format!("{path}: expected const {c}, got {value}"));
        }
    }
    if let Some(required) = schema.get("required").and_then(Value::as_array) {
        for key in required.iter().filter_map(Value::as_str) {
            if value.get(key).is_none() {
                errors.push(format!("{path}: missing required key '{key}'"));
            }
        }
    }
    if let Some(props) = schema.get("properties").and_then(Value::as_object) {
        for (key, sub) in props {
            if let Some(v) = value.get(key) {
                validate(sub, v, &format!("{path}.{key}"), errors);
            }
        }
        if let Some(extra) = schema.get("additionalProperties") {
            if extra.is_object() {
                if let Some(obj) = value.as_object() {
                    for (key, v) in obj {
                        if !props.contains_key(key) {
                            validate(extra, v, &format!("{path}.{key}"), errors);
                        }
                    }
                }
            }
        }
    }
    if let Some(items) = schema.get("items") {
        if let Some(arr) = value.as_array() {
            for (i, v) in arr.iter().enumerate() {
                validate(items, v, &format!("{path}[{i}]"), errors);
            }
        }
    }
    if let Some(options) = schema.get("oneOf").and_then(Value::as_array) {
        let matching = options
            .iter()
            .filter(|option| {
                let mut errs = Vec::new();
                validate(option, value, path, &mut errs);
                errs.is_empty()
            })
            .count();
        if matching != 1 {
            errors.push(format!(
                "{path}: {matching} of the oneOf branches matched (need 1)"
            ));
        }
    }
}

fn type_matches(name: &str, value: &Value) -> bool {
    match name {
        "object" => value.is_object(),
        "array" => value.is_array(),
        "string" => value.is_string(),
        "number" => value.is_number(),
        "integer" => value.is_i64() || value.is_u64(),
        "boolean" => value.is_boolean(),
        "null" => value.is_null(),
        _ => false,
    }
}

#[test]
fn json_outputs_validate_against_shipped_schema() {
    let schema_text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/schemas/output.schema.json"
    ))
    .expect("schema shipped in the repo");
    let schema: Value = serde_json::from_str(&schema_text).expect("schema is valid JSON");

    let outputs = [
        run(&["constants", "--p", "1.5", "--d", "2"]),
        run(&["constants", "--p", "2", "--d", "1"]),
        run(&["figure", "--p-grid", "1.3:1.7:0.1"]),
        run(&[
            "moment",
            "--model",
            "uniform_sphere(dim=2, r=1)",
            "--p",
            "1.3",
            "--method",
            "all",
            "--samples",
            "5000",
        ]),
        run(&[
            "verify",
            "--check",
            "vbe,spread,tightness",
            "--p",
            "1.5",
            "--samples",
            "1000",
            "--specs",
            "4",
            "--two-point-trials",
            "100",
        ]),
    ];
    for out in &outputs {
        assert_eq!(
            out.status.code(),
            Some(0),
            "stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v: Value = serde_json::from_str(&stdout(out)).expect("valid JSON");
        let mut errors = Vec::new();
        validate(&schema, &v, "$", &mut errors);
        assert!(errors.is_empty(), "schema violations: {errors:#?}");
    }
}

#[test]
fn constants_p1_reports_documented_limits() {
    let out = run(&["constants", "--p", "1", "--d", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let consts = &v["payload"]["constants"];
    assert_eq!(consts["C_p"]["value"].as_f64().unwrap(), 2.0);
    assert!(consts["C_p"]["note"].as_str().unwrap().contains("limit"));
    assert_eq!(consts["kappa_p"]["value"].as_f64().unwrap(), 2.0);
}

#[test]
fn verify_accepts_model_descriptor() {
    let out = run(&[
        "verify",
        "--check",
        "iid-diff,spread",
        "--model",
        "point_mass(dim=2, r=1)",
        "--samples",
        "500",
        "--specs",
        "2",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let items = v["payload"]["items"].as_array().unwrap();
    assert!(items
        .iter()
        .any(|i| i["name"].as_str().unwrap().starts_with("model/iid-diff")));
    assert!(items
        .iter()
        .any(|i| i["name"].as_str().unwrap().starts_with("model/spread")));
    // bad model descriptor in verify is a parse error
    let bad = run(&[
        "verify",
        "--check",
        "iid-diff",
        "--model",
        "nonsense(1)",
        "--samples",
        "100",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}
