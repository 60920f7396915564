//! The `sia` binary end to end: every subcommand, its JSON output and its exit codes.

use std::process::{Command, Output};

use serde_json::Value;

fn sia(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sia")).args(args).env_remove("SIA_TOL").output().expect("binary runs")
}

/// Runs with `--json`, expects exit code 0 and returns the parsed object.
fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = sia(&full);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("one JSON object")
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("no number `{key}` in {v}"))
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn diff_and_grad() {
    let v = json(&["diff", "--expr", "x^3", "--at", "2", "--order", "2"]);
    assert_eq!(num(&v, "value"), 12.0);
    let v = json(&["diff", "--expr", "-sin(t)", "--var", "t", "--at", "-1"]);
    assert!(close(num(&v, "value"), -(-1f64).cos(), 1e-15));

    let v = json(&["grad", "--expr", "x^2*y", "--vars", "x,y", "--at", "1,2", "--hessian"]);
    assert_eq!(v["gradient"], serde_json::json!([4.0, 1.0]));
    assert_eq!(v["hessian"], serde_json::json!([[4.0, 2.0], [2.0, 0.0]]));
}

#[test]
fn text_output() {
    let out = sia(&["diff", "--expr", "x^2", "--at", "3"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "6\n");
}

#[test]
fn integrals_and_geometry() {
    assert!(close(num(&json(&["integrate", "--expr", "x^2", "--from", "0", "--to", "3"]), "value"), 9.0, 1e-12));
    let len = num(&json(&["arclength", "--expr", "3*x", "--from", "0", "--to", "1"]), "value");
    assert!(close(len, 10f64.sqrt(), 1e-12));
    let cone = json(&["surface", "--expr", "x", "--from", "0", "--to", "1"]);
    assert!(close(num(&cone, "value"), std::f64::consts::PI * 2f64.sqrt(), 1e-12));
    assert_eq!(cone["negative_radius"], false);
    let cyl = num(&json(&["volume", "--expr", "1", "--from", "0", "--to", "2"]), "value");
    assert!(close(cyl, 2.0 * std::f64::consts::PI, 1e-12));
    let circle = num(&json(&["polar", "--expr", "2", "--from", "0", "--to", "6.283185307179586"]), "value");
    assert!(close(circle, 4.0 * std::f64::consts::PI, 1e-12));
    let cat = json(&["catenary", "--a", "2"]);
    assert!(num(&cat, "max_residual") <= 1e-9);
    assert_eq!(cat["ok"], true);
}

#[test]
fn solvers() {
    let v = json(&["stationary", "--f", "(x-1)^2 + (y+2)^2", "--vars", "x,y", "--guess", "0,0"]);
    assert_eq!(v["point"], serde_json::json!([1.0, -2.0]));
    let k = (16.0 * std::f64::consts::PI).to_string();
    let v = json(&[
        "constrained",
        "--f",
        "2*pi*r*h + 2*pi*r^2",
        "--g",
        "pi*r^2*h",
        "--k",
        &k,
        "--vars",
        "r,h",
        "--guess",
        "3,0.5",
    ]);
    let p: Vec<f64> = v["point"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!((p[1] - 2.0 * p[0]).abs() <= 1e-8);
    assert_eq!(v["verified"], true);
}

#[test]
fn theorems() {
    for (args, expect) in [
        (vec!["stokes", "--field", "-y, x, 0", "--cube", "square3"], 2.0),
        (vec!["stokes", "--field", "-y, x, 0", "--map", "u, v, u^2 - v^2"], 2.0),
        (vec!["divergence", "--field", "x, y, z", "--cube", "identity3"], 3.0),
        (vec!["gstokes", "--form", "-y*dx + x*dy", "--cube", "identity2"], 2.0),
        (vec!["gstokes", "--form", "z*dx", "--map", "s, t, s*t", "--params", "s,t"], -0.5),
    ] {
        let v = json(&args);
        assert_eq!(v["ok"], true, "{args:?}");
        assert!(num(&v, "gap") <= 1e-9, "{args:?}");
        assert!(close(num(&v, "lhs"), expect, 1e-12), "{args:?}: {v}");
    }
    let form = r#"{"degree": 1, "ambient": 2, "terms": [{"indices": [1], "coeff": "x"}]}"#;
    let cube = r#"{"dims": [2, 2], "components": ["2*u", "v"]}"#;
    assert!(close(num(&json(&["gstokes", "--form", form, "--cube", cube]), "lhs"), 2.0, 1e-12));

    let v = json(&["ftc", "--expr", "exp(x)", "--germs", "3"]);
    assert_eq!(v["ok"], true);
    assert_eq!(v["report"]["germs"].as_array().unwrap().len(), 3);
    assert!(close(num(&v["report"], "endpoint_difference"), std::f64::consts::E - 1.0, 1e-15));
}

#[test]
fn selftest_passes() {
    let v = json(&["selftest"]);
    assert_eq!(v["ok"], true);
    assert_eq!(v["report"]["seed"], 1729);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| sia(args).status.code();
    // parse and usage errors
    assert_eq!(code(&["diff", "--expr", "x^", "--at", "1"]), Some(2));
    assert_eq!(code(&["diff", "--expr", "foo(x)", "--at", "1"]), Some(2));
    assert_eq!(code(&["bogus"]), Some(2));
    assert_eq!(code(&["diff", "--at", "1"]), Some(2));
    assert_eq!(code(&["--tol", "-1", "diff", "--expr", "x", "--at", "1"]), Some(2));
    assert_eq!(code(&["catenary", "--a", "0"]), Some(2));
    assert_eq!(code(&["gstokes", "--form", "dx^dz", "--cube", "identity2"]), Some(2));
    // domain errors, including a form whose degree does not fit the cube
    assert_eq!(code(&["diff", "--expr", "log(x)", "--at", "-1"]), Some(3));
    assert_eq!(code(&["gstokes", "--form", "dx^dy", "--cube", "identity2"]), Some(3));
    // no convergence, and a verification that misses its tolerance
    assert_eq!(code(&["stationary", "--f", "exp(x)", "--vars", "x", "--guess", "0"]), Some(1));
    assert_eq!(code(&["--quad-order", "2", "gstokes", "--form", "sin(5*x)*dy", "--cube", "identity2"]), Some(1));
    assert_eq!(code(&["--help"]), Some(0));
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_sia"))
        .args(["--json", "stokes", "--field", "-y, x, 0", "--cube", "square3"])
        .env("SIA_TOL", "0.001")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(num(&v, "tol"), 1e-3);
}
