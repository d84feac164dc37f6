//! End-to-end tests of the command-line surface: outputs, determinism and
//! exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bihilbert"))
}

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.pop();
    p.pop();
    p.push("data/presentations");
    p.push(name);
    p.to_str().expect("utf-8 path").to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn closedform_minors_r3() {
    let out = run(&["closedform", "minors", "--r", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("e = (297, -81, 18, -2, -1, 1)"), "{text}");
    assert!(text.contains("s = 5"), "{text}");
}

#[test]
fn fit_reports_pair_multiplicities() {
    let out = run(&["fit", "--input", &data("ci-pair-23.json")]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("e = (-6, 0, 1)"), "{text}");

    let json = run(&[
        "mixedmult",
        "--input",
        &data("ci-pair-23.json"),
        "--format",
        "json",
    ]);
    assert!(json.status.success());
    let value: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(value["e"], serde_json::json!([-6, 0, 1]));
    assert_eq!(value["s"], 2);
}

#[test]
fn fit_decomposition_source_matches_oracle() {
    let oracle = run(&["mixedmult", "--input", &data("ci-pair-23.json")]);
    let decomposed = run(&[
        "mixedmult",
        "--input",
        &data("ci-pair-23.json"),
        "--source",
        "decomposition",
    ]);
    assert!(oracle.status.success() && decomposed.status.success());
    assert_eq!(stdout(&oracle), stdout(&decomposed));
}

#[test]
fn table_csv_output() {
    let out = run(&[
        "table",
        "--input",
        &data("polyring-xyz.json"),
        "--umax",
        "3",
        "--vmax",
        "2",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("u,v,dim"));
    assert!(text.contains("3,2,3\n"), "{text}");
    assert!(text.contains("2,2,3\n"), "{text}");
}

#[test]
fn diagonal_comparison() {
    let out = run(&[
        "diagonal",
        "--input",
        &data("ci-pair-23.json"),
        "--c",
        "7",
        "--e",
        "2",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["multiplicity"], 25);
    assert_eq!(value["degree"], 2);
    assert_eq!(value["embedded_degree_check"]["multiplicities_equal"], true);
    assert_eq!(value["embedded_degree_check"]["degrees_equal"], true);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "fit",
        "--input",
        &data("minors-2x3.json"),
        "--source",
        "decomposition",
        "--format",
        "json",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn input_errors_exit_2() {
    let dir = std::env::temp_dir().join("bihilbert-cli-test");
    std::fs::create_dir_all(&dir).unwrap();

    // Grading violation: declared degree does not match.
    let bad = dir.join("bad-degree.json");
    std::fs::write(
        &bad,
        r#"{"kind":"rees","x_vars":["x"],"degrees":[2],"generators":["x^3"]}"#,
    )
    .unwrap();
    let out = run(&["fit", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Syntax error in a generator.
    let syntax = dir.join("bad-syntax.json");
    std::fs::write(
        &syntax,
        r#"{"kind":"rees","x_vars":["x"],"degrees":[2],"generators":["x^"]}"#,
    )
    .unwrap();
    let out = run(&["table", "--input", syntax.to_str().unwrap(), "--umax", "2", "--vmax", "2"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["fit", "--input", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cell_budget_skips_exit_3() {
    let dir = std::env::temp_dir().join("bihilbert-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let pair = dir.join("nonmono-pair.json");
    std::fs::write(
        &pair,
        r#"{"kind":"rees","x_vars":["x","y","z"],"degrees":[2,3],
           "generators":["x^2 - y*z", "y^3 - z^3"]}"#,
    )
    .unwrap();
    let out = run(&[
        "table",
        "--input",
        pair.to_str().unwrap(),
        "--umax",
        "8",
        "--vmax",
        "2",
        "--cell-budget",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("skipped"));
}

#[test]
fn stabilization_failure_exits_1() {
    // Degree bound 0 cannot fit the pair's quadratic polynomial.
    let out = bin()
        .args([
            "fit",
            "--input",
            &data("ci-pair-23.json"),
            "--degree-bound",
            "0",
            "--budget",
            "4",
        ])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_passes_on_a_correct_build() {
    let out = run(&["verify"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("all passed"), "{text}");
}
