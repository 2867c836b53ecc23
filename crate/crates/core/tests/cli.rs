use std::path::PathBuf;
use std::process::Command;

use hodge_fans::cli::run_cli;
use serde_json::Value;

fn casebook_file(name: &str) -> String {
    format!("{}/casebook/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn write_doc(name: &str, body: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("cli-{name}.json"));
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["hodge-fans"];
    full.extend_from_slice(args);
    let code = run_cli(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const ZERO_4: &str = r#"[["0","0","0","0"],["0","0","0","0"],["0","0","0","0"],["0","0","0","0"]]"#;

#[test]
fn casebook_passes_every_claim() {
    let (code, out, _) = run(&["casebook"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = run(&["casebook", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let claims = v["claims"].as_array().unwrap();
    assert_eq!(claims.len(), 7);
    assert!(claims.iter().all(|c| c["verdict"] == "pass"));
}

#[test]
fn injected_type_three_fails() {
    let (code, out, _) = run(&["casebook", "--inject-type-three", "--format", "json"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    let failed: Vec<u64> = v["claims"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["verdict"] == "fail")
        .map(|c| c["id"].as_u64().unwrap())
        .collect();
    assert_eq!(failed, vec![3]);
}

#[test]
fn casebook_rejects_impossible_h01() {
    let (code, _, err) = run(&["casebook", "--h01", "3"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"), "{err}");
}

#[test]
fn reduce_reports_certificate() {
    let path = write_doc("reduce", r#"{"form": [["2", "1"], ["1", "2"]]}"#);
    let (code, out, _) = run(&["reduce", &path]);
    assert_eq!(code, 0);
    assert!(out.contains("gamma = [1 0; 0 -1]"), "{out}");
    assert!(out.contains("reduced = [2 -1; -1 2]"), "{out}");
    assert!(out.contains("sigma_0 coordinates = (1, 1, 1)"), "{out}");
    assert!(out.contains("certificate holds: true"));
}

#[test]
fn reduce_rejects_indefinite_form() {
    let path = write_doc("indefinite", r#"{"form": [["1", "2"], ["2", "1"]]}"#);
    let (code, _, err) = run(&["reduce", &path]);
    assert_eq!(code, 2);
    assert!(err.contains("positive definite"), "{err}");
}

#[test]
fn classify_zero_is_an_input_error() {
    let path = write_doc("zero", &format!(r#"{{"n": 2, "matrix": {ZERO_4}}}"#));
    let (code, _, err) = run(&["classify", &path]);
    assert_eq!(code, 2);
    assert!(err.contains("not a nonzero nilpotent"), "{err}");
}

#[test]
fn classify_square_zero_and_principal() {
    let type_two = write_doc(
        "type-two",
        r#"{"n": 2, "matrix": [["0","0","0","0"],["0","0","0","0"],["-1","0","0","0"],["0","-1","0","0"]]}"#,
    );
    let (code, out, _) = run(&["classify", &type_two]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("type II"), "{out}");
    assert!(out.contains("cone: odd"), "{out}");
    let principal = write_doc(
        "principal",
        r#"{"n": 2, "matrix": [["0","0","0","0"],["1","0","0","0"],["0","0","0","-1"],["0","1","0","0"]]}"#,
    );
    let (code, out, _) = run(&["classify", &principal]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("type III"), "{out}");
}

#[test]
fn fan_of_standard_plane() {
    let path = write_doc(
        "plane",
        r#"{"n": 2, "basis": [["0","0","1","0"],["0","0","0","1"]]}"#,
    );
    let (code, out, _) = run(&["fan", &path, "--word-bound", "1"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("fan valid: true"), "{out}");
    let (code, out, _) = run(&["fan", &path, "--word-bound", "1", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v.is_object());
}

#[test]
fn fan_rejects_non_isotropic_basis() {
    let path = write_doc(
        "symplectic-plane",
        r#"{"n": 2, "basis": [["1","0","0","0"],["0","0","1","0"]]}"#,
    );
    let (code, _, err) = run(&["fan", &path]);
    assert_eq!(code, 2);
    assert!(err.contains("isotropic"), "{err}");
}

#[test]
fn orbit_checks_and_lifts() {
    let (code, out, _) = run(&["check-orbit", &casebook_file("type_one_orbit.json")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("nilpotent orbit: true"));
    let (code, out, _) = run(&["lift", &casebook_file("siegel_type_one.json")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("lift:"));
}

#[test]
fn lift_of_rank_two_boundary_is_obstructed() {
    let text = std::fs::read_to_string(casebook_file("siegel_type_two.json")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    doc["target_hodge"] = serde_json::json!({"1": 1, "0": 1, "-1": 1, "-2": 1});
    let path = write_doc("obstructed", &doc.to_string());
    let (code, out, _) = run(&["lift", &path]);
    assert_eq!(code, 1);
    assert!(out.contains("obstructed: dim Im N = 2 > h^(0,-1) = 1"), "{out}");
}

#[test]
fn lift_requires_target() {
    let (code, _, err) = run(&["lift", &casebook_file("siegel_type_two.json")]);
    assert_eq!(code, 2);
    assert!(err.contains("target_hodge"), "{err}");
}

#[test]
fn dim_bound_for_type_one() {
    let path = write_doc(
        "dim-bound",
        r#"{"n": 2, "m": 1, "dim_sigma": 1, "h_prime": {"1": 1, "-2": 1},
            "hodge": {"1": 1, "0": 1, "-1": 1, "-2": 1}}"#,
    );
    let (code, out, err) = run(&["dim-bound", &path, "--format", "json"]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["bound"], "2");
    assert_eq!(v["is_equality_case"], true);
}

#[test]
fn malformed_documents_exit_with_two() {
    let cases = [
        ("truncated", r#"{"n": 2, "matrix": [["0","0""#, "line"),
        ("ragged", r#"{"n": 2, "matrix": [["0","0","0","0"],["0","0"],["0","0","0","0"],["0","0","0","0"]]}"#, "matrix[1]"),
        ("bad-rational", r#"{"form": [["2", "x"], ["1", "2"]]}"#, "invalid rational \"x\""),
        ("unknown-field", r#"{"form": [["2", "1"], ["1", "2"]], "extra": 1}"#, "extra"),
    ];
    for (name, body, needle) in cases {
        let path = write_doc(name, body);
        let cmd = if name == "truncated" || name == "ragged" { "classify" } else { "reduce" };
        let (code, _, err) = run(&[cmd, &path]);
        assert_eq!(code, 2, "{name}: {err}");
        assert!(err.contains(needle), "{name}: {err}");
    }
    let (code, _, err) = run(&["reduce", "/nonexistent/form.json"]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot read"), "{err}");
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn binary_is_deterministic() {
    let bin = env!("CARGO_BIN_EXE_hodge-fans");
    let run_bin = || Command::new(bin).args(["casebook", "--format", "json"]).output().unwrap();
    let (a, b) = (run_bin(), run_bin());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["case_id"].as_str().map(|s| !s.is_empty()), Some(true));
    let bad = Command::new(bin).args(["reduce", "/nonexistent/form.json"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
