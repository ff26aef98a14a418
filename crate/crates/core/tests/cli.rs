use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qjackson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qjackson"))
        .args(args)
        .env_remove("QJACKSON_TOL")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn schema() -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn verify_report_matches_schema() {
    let out = qjackson(&["verify", "--q", "0.5", "--seed", "7"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let report = stdout_json(&out);
    let schema = schema();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    if let Err(errors) = compiled.validate(&report) {
        let msgs: Vec<String> = errors.map(|e| e.to_string()).collect();
        panic!("schema violations: {msgs:?}");
    }
    let names: Vec<&str> = report["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert!(names.len() >= 10);
    assert_eq!(report["passed"], Value::Bool(true));

    // a broken report is rejected
    let mut bad = report.clone();
    bad["suites"][0]["checked"] = Value::from(-1);
    assert!(!compiled.is_valid(&bad));
}

#[test]
fn seed_changes_only_the_random_suite() {
    let a = stdout_json(&qjackson(&["verify", "--seed", "1"]));
    let b = stdout_json(&qjackson(&["verify", "--seed", "2"]));
    assert_eq!(a["seed"], 1);
    assert_eq!(b["seed"], 2);
    let fixed = |v: &Value| -> Vec<Value> {
        v["suites"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|s| s["name"] != "seeded-random-properties")
            .cloned()
            .collect()
    };
    assert_eq!(fixed(&a), fixed(&b));
}

#[test]
fn pairings_are_json_lines() {
    let out = qjackson(&["pairings", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 3);
    let mut w: Vec<u64> = lines
        .iter()
        .map(|l| l["weight_exp"].as_u64().unwrap())
        .collect();
    w.sort();
    assert_eq!(w, vec![0, 1, 2]);
    assert_eq!(lines[1]["pairs"], serde_json::json!([[1, 3], [2, 4]]));
}

#[test]
fn moments_value() {
    let out = qjackson(&["moments", "--q", "0.5", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let value = v["value"].as_f64().unwrap();
    assert!((value - 1.75).abs() < 1e-12, "{value}");
    assert_eq!(v["expected"].to_string(), "1.7500000000000000e+0");
}

#[test]
fn floats_carry_seventeen_digits() {
    let out = qjackson(&["gamma", "--q", "0.5", "--t", "2", "--output", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header[..4], ["q", "a", "t", "closed"]);
    let row = rdr.records().next().unwrap().unwrap();
    let mantissa = row[3].split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{}", &row[3]);
}

#[test]
fn expand_exact_json() {
    let out = qjackson(&[
        "expand", "--J", "4", "--D", "1", "--M", "4", "--mode", "exact",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let terms = v["terms"].as_array().unwrap();
    let g4 = terms
        .iter()
        .find(|t| t["monomial"] == serde_json::json!([4]))
        .unwrap();
    assert_eq!(g4["order"], 4);
    assert_eq!(
        g4["coeff_qseries"],
        serde_json::json!(["1", "-2", "3", "-4", "5"])
    );
}

#[test]
fn expand_float_values() {
    let out = qjackson(&[
        "expand", "--J", "4", "--D", "1", "--mode", "float", "--q", "0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v["terms"][0]["value"].is_number());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec![
            "expand", "--J", "4", "--D", "3", "--mode", "exact", "--tol", "1e-9",
        ],
        vec!["expand", "--J", "4", "--D", "3", "--mode", "float"],
        vec!["expand", "--J", "4", "--D", "3", "--q", "0.5"],
        vec!["moments", "--q", "1.5", "--n", "2"],
        vec!["compare", "--q", "0.5", "--g", "three=0.1"],
        vec!["compare", "--q", "0.5", "--g", "5=0.1", "--J", "4"],
        vec!["pairings"],
        vec!["no-such-command"],
        vec!["verify", "--output", "yaml"],
    ] {
        let out = qjackson(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn environment_tolerance_is_not_a_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_qjackson"))
        .args(["expand", "--J", "2", "--D", "1", "--M", "2"])
        .env("QJACKSON_TOL", "1e-9")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn failed_check_exits_one() {
    // at g3 = 0.1 the residual is already at rounding level, so doubling the
    // coupling cannot reproduce the 2^6 ratio
    let out = qjackson(&["compare", "--q", "0.5", "--g", "3=0.1", "--scaling"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["passed"], Value::Bool(false));
    assert_eq!(v["base"]["passed"], Value::Bool(true));
}

#[test]
fn compare_and_graphsum() {
    let out = qjackson(&["compare", "--q", "0.5", "--g", "3=0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["passed"], Value::Bool(true));
    assert_eq!(v["d_max"], 4);

    let out = qjackson(&["graphsum", "--cmax", "2", "--dmax", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["passed"], Value::Bool(true));
    assert!(v["monomials"].as_array().unwrap().len() > 1);
}

#[test]
fn lambda_and_text_output() {
    let v = stdout_json(&qjackson(&["lambda", "--c", "0", "--d", "3"]));
    assert_eq!(v["limit_q1"], "1/6");
    let out = qjackson(&[
        "lambda", "--c", "2", "--d", "1", "--kind", "kappa", "--output", "text",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("kappa_{2,1} = "));
    assert!(text.ends_with("q -> 1: 0\n"));
}
