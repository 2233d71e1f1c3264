use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_slicereg"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn coeffs(v: &Value) -> Vec<[f64; 4]> {
    serde_json::from_value(v["coeffs"].clone()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn compose_worked_example() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", r#"{"coeffs":[[0,0,0,0],[0,0,0,0],[1,0,0,0]]}"#);
    let phi = write(dir.path(), "phi.json", r#"{"coeffs":[[0,0,0,0],[0,0,1,0],[0,1,0,0]]}"#);
    let out = run(&["--degree", "8", "compose", s(&f), s(&phi), "--variant", "vlacci-right"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let c = coeffs(&stdout_json(&out));
    let expect = [
        [0.0; 4],
        [0.0; 4],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -2.0 / 3.0],
        [-1.0, 0.0, 0.0, 0.0],
    ];
    assert_eq!(c.len(), expect.len());
    for (a, b) in c.iter().zip(&expect) {
        for k in 0..4 {
            assert!((a[k] - b[k]).abs() < 1e-12);
        }
    }
}

#[test]
fn star_to_file_round_trips() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", r#"{"coeffs":[[0,0,0,0],[0,0,0,0],[0,1,0,0]]}"#);
    let g = write(dir.path(), "g.json", r#"{"coeffs":[[1,0,0,0],[0,0,1,0]]}"#);
    let target = dir.path().join("out.json");
    let out = run(&["star", s(&f), s(&g), "-o", s(&target)]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(coeffs(&v), vec![[0.0; 4], [0.0; 4], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]]);
    // the written file is valid input again
    let again = run(&["conjugate", s(&target)]);
    assert!(again.status.success());
    assert_eq!(coeffs(&stdout_json(&again))[3], [0.0, 0.0, 0.0, -1.0]);
}

#[test]
fn json_floats_have_17_digits() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", r#"{"coeffs":[[0.1,0,0,0]]}"#);
    let out = run(&["conjugate", s(&f)]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1.0000000000000001e-1"), "{text}");
}

#[test]
fn malformed_input_reports_location() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "bad.json", r#"{"coeffs":[[1,0,0]]}"#);
    let out = run(&["conjugate", s(&f)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 1") && err.contains("column"), "{err}");
    let missing = run(&["conjugate", "/nonexistent/f.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn norms() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", r#"{"coeffs":[[1,0,0,0],[0,1,0,0]]}"#);
    let v = stdout_json(&run(&["norm", s(&f)]));
    assert!((v["norm"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-15);
    let one = write(dir.path(), "one.json", r#"{"coeffs":[[1,0,0,0]]}"#);
    let v = stdout_json(&run(&["norm", s(&one), "--p", "inf"]));
    assert!((v["norm"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(v["grid"]["angles"].as_u64().is_some());
}

fn mobius_file(dir: &Path, a: f64, degree: usize) -> PathBuf {
    let mut c = vec![format!("[{a},0,0,0]")];
    for n in 1..=degree {
        c.push(format!("[{},0,0,0]", -(1.0 - a * a) * a.powi(n as i32 - 1)));
    }
    write(dir, "mobius.json", &format!(r#"{{"radius":1,"coeffs":[{}]}}"#, c.join(",")))
}

#[test]
fn opnorm_schema_and_sizes() {
    let dir = TempDir::new().unwrap();
    let phi = mobius_file(dir.path(), 0.5, 256);
    let v = stdout_json(&run(&["--degree", "128", "opnorm", s(&phi)]));
    let sqrt3 = 3f64.sqrt();
    assert_eq!(v["N"].as_u64(), Some(128));
    let norm = v["norm"].as_f64().unwrap();
    assert!(norm <= sqrt3 + 1e-9 && norm >= 0.97 * sqrt3, "{norm}");
    assert!((v["closed_form"].as_f64().unwrap() - sqrt3).abs() < 1e-12);
    assert!(v["lower_bound"].as_f64().unwrap() <= sqrt3);

    let out = run(&["--out", "csv", "opnorm", s(&phi), "--sizes", "16,32,64"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,norm,lower_bound,closed_form");
    assert_eq!(lines.len(), 4);
}

#[test]
fn classify_and_denjoy_wolff() {
    let dir = TempDir::new().unwrap();
    // (z + 0.5)/(1 + 0.5z) = 0.5 + Σ 0.75 (-0.5)^{n-1} zⁿ
    let mut c = vec!["[0.5,0,0,0]".to_string()];
    for n in 1..=128 {
        c.push(format!("[{},0,0,0]", 0.75 * (-0.5f64).powi(n - 1)));
    }
    let f = write(dir.path(), "hyp.json", &format!(r#"{{"radius":2,"coeffs":[{}]}}"#, c.join(",")));
    let v = stdout_json(&run(&["classify", s(&f)]));
    assert_eq!(v["kind"], "hyperbolic");
    assert_eq!(v["fixed_points"].as_array().unwrap().len(), 2);

    let out = run(&["--out", "csv", "--tol", "1e-6", "denjoy-wolff", s(&f), "--n-max", "40"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,sup_distance"));
    let last: f64 = lines.last().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!(last < 1e-6);

    let id = write(dir.path(), "id.json", r#"{"radius":1,"coeffs":[[0,0,0,0],[1,0,0,0]]}"#);
    assert_eq!(run(&["denjoy-wolff", s(&id)]).status.code(), Some(2));
}

#[test]
fn iterate_and_reciprocal() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", r#"{"coeffs":[[1,0,0,0],[0,-1,0,0]]}"#);
    let v = stdout_json(&run(&["--degree", "8", "reciprocal", s(&f)]));
    let c = coeffs(&v);
    assert_eq!(c.len(), 9);
    assert_eq!(c[2], [-1.0, 0.0, 0.0, 0.0]);

    let g = write(dir.path(), "g.json", r#"{"radius":1,"coeffs":[[0,0,0,0],[0.5,0,0,0]]}"#);
    let v = stdout_json(&run(&["--degree", "8", "iterate", s(&g), "--n", "3"]));
    assert_eq!(coeffs(&v)[1], [0.125, 0.0, 0.0, 0.0]);
}

#[test]
fn verify_unknown_suite() {
    let out = run(&["verify", "--suite", "nonexistent"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!(v["cases"].as_array().unwrap().is_empty());
    assert!(v["summary"]["notes"][0].as_str().unwrap().contains("nonexistent"));
}

#[test]
fn verify_is_deterministic_and_schema_complete() {
    let a = run(&["verify", "--suite", "conjugation", "--seed", "5"]);
    let b = run(&["verify", "--suite", "conjugation", "--seed", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    for c in v["cases"].as_array().unwrap() {
        for key in ["name", "paper_anchor", "status", "max_error"] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
    }
    for key in ["pass", "fail", "flagged", "skipped"] {
        assert!(v["summary"][key].as_u64().is_some());
    }
}

#[test]
fn verify_examples_only_flags_the_known_conflict() {
    let out = run(&["verify", "--suite", "examples"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["summary"]["fail"], 0);
    let flagged: Vec<&str> = v["cases"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "flagged_discrepancy")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(
        flagged,
        ["examples/compose/vlacci_left/identity_outer", "examples/compose/vlacci_right/identity_outer"]
    );
}

#[test]
fn verify_littlewood_seed_one() {
    let out = run(&["--out", "table", "verify", "--suite", "littlewood", "--seed", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("pass 1000  fail 0"), "{}", text.lines().last().unwrap_or(""));
}
