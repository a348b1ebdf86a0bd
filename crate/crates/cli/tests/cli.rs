use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use arrcoh_cli::{parse_spec_str, CliError};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn arrcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arrcoh")).args(args).output().unwrap()
}

fn json_ok(args: &[&str]) -> Value {
    let out = arrcoh(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn error_code(args: &[&str]) -> (i32, String) {
    let out = arrcoh(args);
    assert!(!out.status.success());
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(v["error"]["message"].as_str().is_some_and(|m| !m.is_empty()));
    (out.status.code().unwrap(), v["error"]["code"].as_str().unwrap().to_string())
}

fn write_spec(dir: &tempfile::TempDir, text: &str) -> String {
    let path = dir.path().join("spec.json");
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn betti_of_the_punctured_line() {
    let v = json_ok(&["betti", data("gm.json").to_str().unwrap()]);
    assert_eq!(v["betti"]["betti"], serde_json::json!([1, 1]));
}

#[test]
fn transverse_lines_have_one_product_block() {
    let v = json_ok(&["cup", data("transverse_lines.json").to_str().unwrap()]);
    let blocks = v["cup"]["nonzero_blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 1);
    assert_eq!(blocks[0]["target"], "L1∩L2");
    assert_eq!(blocks[0]["degree"], 2);
}

#[test]
fn verify_beta_certifies_all_conditions() {
    let v = json_ok(&["verify-beta", data("braid3.json").to_str().unwrap(), "--seed", "7"]);
    let c = &v["beta_certificate"];
    for t in ["t1", "t2", "t3", "t4", "injective"] {
        assert_eq!(c["report"][t], true, "{t}");
    }
    assert_eq!(c["seed"], 7);
    assert_eq!(c["beta"].as_array().unwrap().len(), v["poset"]["elements"].as_array().unwrap().len());
}

#[test]
fn every_command_is_deterministic() {
    let spec = data("skew_axes.json");
    let sub = data("diagonal.json");
    let lines = data("transverse_lines.json");
    let runs: Vec<Vec<&str>> = vec![
        vec!["lattice", spec.to_str().unwrap()],
        vec!["betti", spec.to_str().unwrap()],
        vec!["decompose", spec.to_str().unwrap(), "--format", "text"],
        vec!["cup", spec.to_str().unwrap()],
        vec!["restrict", lines.to_str().unwrap(), "--subspace", sub.to_str().unwrap()],
        vec!["verify-beta", spec.to_str().unwrap(), "--seed", "3"],
        vec!["sheaf-check", lines.to_str().unwrap()],
        vec!["oracle", spec.to_str().unwrap(), "--q", "5"],
    ];
    for args in runs {
        let a = arrcoh(&args);
        let b = arrcoh(&args);
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let spec = data("braid3.json");
    let printed = arrcoh(&["decompose", spec.to_str().unwrap()]).stdout;
    let written = arrcoh(&["decompose", spec.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(written.status.success());
    assert!(written.stdout.is_empty());
    assert_eq!(std::fs::read(&out).unwrap(), printed);
}

#[test]
fn modulus_flag_overrides_the_file() {
    let v = json_ok(&["betti", data("gm.json").to_str().unwrap(), "--modulus", "7"]);
    assert_eq!(v["input"]["modulus"], 7);
    assert_eq!(v["betti"]["modulus"], 7);
}

#[test]
fn rational_entries_are_exact() {
    let v = json_ok(&["lattice", data("skew_axes.json").to_str().unwrap()]);
    let shifted = &v["input"]["subspaces"][1]["equations"][1];
    assert_eq!(shifted[3], "1/2");
    let parsed = parse_spec_str(
        r#"{"ambient_dimension": 1, "modulus": 2, "subspaces": [{"name": "p", "equations": [["2/4", "-3/6"]]}]}"#,
        None,
    )
    .unwrap();
    assert_eq!(parsed.echo.subspaces[0].equations[0], vec!["1/2", "-1/2"]);
}

#[test]
fn text_output_follows_field_order() {
    let out = arrcoh(&["betti", data("gm.json").to_str().unwrap(), "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("command: betti\n"));
    assert!(text.contains("  betti: [1, 1]\n"));
}

#[test]
fn spec_errors_have_stable_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("{", "malformed_json"),
        (r#"{"ambient_dimension": 2, "modulus": 2}"#, "invalid_spec"),
        (r#"{"ambient_dimension": 1, "subspaces": []}"#, "missing_modulus"),
        (r#"{"ambient_dimension": 1, "modulus": 1, "subspaces": []}"#, "bad_modulus"),
        (
            r#"{"ambient_dimension": 2, "modulus": 2, "subspaces": [{"name": "z", "equations": [[0, 0, 0]]}]}"#,
            "not_proper",
        ),
        (
            r#"{"ambient_dimension": 1, "modulus": 2, "subspaces": [{"name": "z", "equations": [[0, 1]]}]}"#,
            "empty_subspace",
        ),
        (
            r#"{"ambient_dimension": 2, "modulus": 2, "subspaces": [{"name": "z", "equations": [[1, 0]]}]}"#,
            "bad_equation_row",
        ),
        (
            r#"{"ambient_dimension": 1, "modulus": 2, "subspaces": [{"name": "z", "equations": [["1/0", 0]]}]}"#,
            "bad_rational",
        ),
        (
            r#"{"ambient_dimension": 1, "modulus": 2, "subspaces": [{"name": "z", "equations": [[1.5, 0]]}]}"#,
            "bad_rational",
        ),
        (
            r#"{"ambient_dimension": 1, "modulus": 2, "subspaces": [{"name": "a", "equations": [[1, 0]]}, {"name": "a", "equations": [[1, 1]]}]}"#,
            "duplicate_name",
        ),
        (
            r#"{"ambient_dimension": 1, "modulus": 2, "subspaces": [{"name": "a", "equations": [[1, 0]]}, {"name": "b", "equations": [[2, 0]]}]}"#,
            "duplicate_subspace",
        ),
    ];
    for (text, code) in cases {
        let path = write_spec(&dir, text);
        assert_eq!(error_code(&["lattice", &path]), (1, code.to_string()), "{text}");
    }
}

#[test]
fn command_errors_have_stable_codes() {
    let gm = data("gm.json");
    let gm = gm.to_str().unwrap();
    assert_eq!(error_code(&["oracle", gm]).1, "missing_flag");
    assert_eq!(error_code(&["oracle", gm, "--q", "4"]).1, "not_prime");
    let braid = data("braid3.json");
    assert_eq!(error_code(&["oracle", braid.to_str().unwrap(), "--q", "101"]).1, "too_many_points");
    assert_eq!(error_code(&["restrict", gm]).1, "missing_flag");
    assert_eq!(error_code(&["lattice", "/nonexistent/spec.json"]).1, "io");
    assert_eq!(error_code(&["frobnicate", gm]), (2, "usage".to_string()));
}

#[test]
fn the_zero_equation_is_not_proper() {
    let e = parse_spec_str(
        r#"{"ambient_dimension": 2, "modulus": 3, "subspaces": [{"name": "zero", "equations": [[0, 0, 0]]}]}"#,
        None,
    )
    .unwrap_err();
    assert_eq!(e, CliError::NotProper("zero".into()));
    assert_eq!(e.code(), "not_proper");
}
