use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn torusloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torusloc")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("torusloc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn list_all_and_filtered() {
    let all = json_of(&torusloc(&["list", "--json"]));
    let names: Vec<&str> = all.as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.len() >= 12);
    for required in ["e-series-edges", "hirzebruch-localization", "g2-sevenfold-h0"] {
        assert!(names.contains(&required), "{required} missing");
    }
    let sub = json_of(&torusloc(&["list", "--module", "laurent", "--json"]));
    let sub = sub.as_array().unwrap();
    assert!(!sub.is_empty() && sub.len() < names.len());
    assert!(sub.iter().all(|c| c["module"] == "laurent"));
}

#[test]
fn run_reports_are_byte_identical() {
    let args = ["run", "--case", "hirzebruch-localization", "--case", "g2-sevenfold-h0", "--json"];
    let a = torusloc(&args);
    let b = torusloc(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let reports = json_of(&a);
    let names: Vec<&str> = reports.as_array().unwrap().iter().map(|r| r["case_name"].as_str().unwrap()).collect();
    assert_eq!(names, ["g2-sevenfold-h0", "hirzebruch-localization"]);
    let checks = reports[1]["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["pass"] == true && c["origin"].is_string()));
}

#[test]
fn thread_cap_does_not_change_reports() {
    let args = ["run", "--case", "threefold-localization", "--case", "negative-fixtures", "--json"];
    let one = Command::new(env!("CARGO_BIN_EXE_torusloc")).args(args).env("TORUSLOC_THREADS", "1").output().unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_torusloc")).args(args).env("TORUSLOC_THREADS", "4").output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_torusloc")).args(["list"]).env("TORUSLOC_THREADS", "x").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(torusloc(&["run", "--case", "no-such-case"]).status.code(), Some(2));
    assert_eq!(torusloc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(torusloc(&["run"]).status.code(), Some(2));
    assert_eq!(torusloc(&["hilbert", "--dim", "8"]).status.code(), Some(2));
    // Odd degree in dimension 9 violates the parity condition.
    assert_eq!(torusloc(&["hilbert", "--dim", "9", "--degree", "7", "--p1", "28"]).status.code(), Some(1));
    assert_eq!(torusloc(&["hilbert", "--dim", "9", "--degree", "8", "--p1", "28"]).status.code(), Some(0));
    // p(1) below the BG threshold fails.
    assert_eq!(torusloc(&["hilbert", "--dim", "7", "--degree", "21", "--p1", "8"]).status.code(), Some(1));
}

#[test]
fn hilbert_json_schema() {
    let v = json_of(&torusloc(&["hilbert", "--dim", "7", "--json"]));
    let coeffs: Vec<&str> = v["p_coeffs"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(coeffs.len(), 8);
    assert_eq!(coeffs[7], "deg");
    assert_eq!(v["identities"].as_array().unwrap().len(), 2);
    assert_eq!(v["bound"], "p1 >= 4 + 5/21*deg");
}

#[test]
fn model_emit_then_localize() {
    let path = scratch("b3.json");
    let out = torusloc(&["model", "--name", "adjoint-B3", "--emit", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&torusloc(&["localize", path.to_str().unwrap(), "--certify", "--json"]));
    assert_eq!(v["value_at_one"]["constant"], "21");
    assert_eq!(torusloc(&["model", "--name", "adjoint-C3"]).status.code(), Some(2));
    assert_eq!(torusloc(&["model", "--name", "pspace", "--weights", "0,1^3"]).status.code(), Some(2));
}

#[test]
fn localize_solve_on_surface_file() {
    let path = scratch("surface.json");
    std::fs::write(&path, torusloc::models::surface_with_unknowns().to_json()).unwrap();
    let out = torusloc(&["localize", path.to_str().unwrap(), "--solve", "--specialize", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("a = 1") && text.contains("b = 1"), "{text}");
    assert!(text.contains("condition: a + b = 2"), "{text}");
    let missing = torusloc(&["localize", "/nonexistent/file.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn roots_and_polytope_json() {
    let r = json_of(&torusloc(&["roots", "--type", "B3", "--json"]));
    for key in ["type", "roots", "long", "short", "lattice"] {
        assert!(r.get(key).is_some(), "{key}");
    }
    assert_eq!(r["roots"].as_array().unwrap().len(), 18);
    let p = json_of(&torusloc(&["polytope", "--roots", "F4", "--edges-at-vertex", "1,1,0,0", "--json"]));
    assert_eq!(p["edge_counts"]["(1,1,0,0)"], 8);
    assert!(p["vertices"].is_array() && p["facets"].is_array());
}
