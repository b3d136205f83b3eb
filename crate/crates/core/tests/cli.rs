use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_merostar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn certified_member_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(
        dir.path(),
        "f.json",
        r#"{"coeffs": [[0.1, 0.0], [0.0, 0.05]]}"#,
    );
    let out = run(&["check", "--class", "me", "--alpha", "1", "--series", &s]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"]["status"], "CertifiedMember");
    assert_eq!(v["coefficient_test"]["holds"], true);
}

#[test]
fn non_member_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(
        dir.path(),
        "f.json",
        r#"{"coeffs": [[0.0, 0.0], [-0.9, 0.0]]}"#,
    );
    let out = run(&["check", "--class", "me", "--alpha", "1", "--series", &s]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"]["status"], "NonMember");
    assert!(v["verdict"]["witness"].is_array());
}

#[test]
fn tme_check_reports_real_axis_refutation() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "t.json", r#"{"magnitudes": [0.34]}"#);
    let out = run(&["check", "--class", "tme", "--alpha", "1", "--series", &s]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["member"], false);
    assert_eq!(v["real_axis"]["status"], "NonMember");
}

#[test]
fn schema_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("missing.json", r#"{"coef": []}"#, "coeffs"),
        ("pair.json", r#"{"coeffs": [[1.0]]}"#, "coeffs[0]"),
        (
            "nan.json",
            r#"{"coeffs": [[0.0, 0.0], [null, 0.0]]}"#,
            "coefficient 1",
        ),
        ("text.json", "not json", "text.json"),
    ];
    for (name, text, needle) in cases {
        let s = write(dir.path(), name, text);
        let out = run(&["check", "--class", "mf", "--alpha", "0", "--series", &s]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{name}: {err}");
    }
    let out = run(&[
        "check",
        "--class",
        "mf",
        "--alpha",
        "0",
        "--series",
        "/no/such/file",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_parameters_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "f.json", r#"{"coeffs": []}"#);
    for args in [
        vec!["check", "--class", "mf", "--alpha", "1.5", "--series", &s],
        vec!["check", "--class", "me", "--alpha", "-1", "--series", &s],
        vec![
            "check",
            "--class",
            "me",
            "--alpha",
            "1",
            "--series",
            &s,
            "--grid-rmax",
            "1.0",
        ],
        vec!["suite", "--name", "thm9.9"],
        vec!["extremal", "--name", "nope"],
        vec!["extremal", "--name", "thm21", "--alpha", "0.5"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn extremal_output_loads_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.json");
    let out = run(&[
        "extremal",
        "--name",
        "thm21",
        "--alpha",
        "2",
        "--degree",
        "20",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let f = merostar::LaurentFunction::load(&path).unwrap();
    assert_eq!(f.len(), 21);
    let listed = run(&["extremal", "--list"]);
    assert!(String::from_utf8_lossy(&listed.stdout).contains("onemz2"));
}

#[test]
fn decompose_prints_weights() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "t.json", r#"{"magnitudes": [0.25, 0.0]}"#);
    let out = run(&["decompose", "--series", &s, "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let w: Vec<f64> = serde_json::from_value(stdout_json(&out)["weights"].clone()).unwrap();
    assert_eq!(w, vec![0.25, 0.75, 0.0]);
}

#[test]
fn suite_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for tag in ["a", "b"] {
        let path = dir.path().join(format!("{tag}.json"));
        let csv = dir.path().join(format!("{tag}.csv"));
        let out = run(&[
            "suite",
            "--name",
            "thm2.3",
            "--seed",
            "3",
            "--grid-rmax",
            "0.99",
            "--grid-theta",
            "256",
            "--out",
            path.to_str().unwrap(),
            "--csv",
            csv.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(fs::read_to_string(&csv).unwrap().starts_with("name,status"));
        let text = fs::read_to_string(&path).unwrap();
        let stripped: Vec<&str> = text
            .lines()
            .filter(|l| !l.contains("\"runtime_ms\""))
            .collect();
        texts.push(stripped.join("\n"));
    }
    assert_eq!(texts[0], texts[1]);
}
