use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_holonomy"))
}

fn bundled(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn run(scenario: &Path, extra: &[&str]) -> (Output, Value) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let output = bin()
        .arg("--scenario")
        .arg(scenario)
        .arg("--out")
        .arg(&out)
        .args(extra)
        .output()
        .unwrap();
    let report = std::fs::read_to_string(&out).map(|s| serde_json::from_str(&s).unwrap()).unwrap_or(Value::Null);
    (output, report)
}

fn write_scenario(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("scenario.json");
    std::fs::write(&p, text).unwrap();
    p
}

const MINIMAL: &str = r#"{
  "schema": 1,
  "group": {"kind": "zn", "n": 2},
  "alphabet": {"vertices": ["p", "q"], "atoms": [{"id": "a", "src": "p", "dst": "q"}]},
  "subgroupoids": {"one": [["a"]]},
  "functions": {"unit": {"on": "one", "expr": {"op": "const", "re": 1}}},
  "command": {"op": "integrate", "functions": ["unit"]}
}"#;

#[test]
fn minimal_scenario_integrates_to_one() {
    let dir = tempfile::tempdir().unwrap();
    let (out, report) = run(&write_scenario(dir.path(), MINIMAL), &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report["results"][0]["mean"]["re"], 1.0);
    assert_eq!(report["results"][0]["mean"]["im"], 0.0);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["command"]["op"], "integrate");
}

#[test]
fn report_goes_to_stdout_without_out() {
    let output = bin().arg("--scenario").arg(bundled("z2-constant.json")).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["pass"], true);
}

#[test]
fn equal_edges_mean_is_one_half() {
    let (out, report) = run(&bundled("z2-equal-edges.json"), &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report["results"][0]["mean"]["re"].as_f64(), Some(0.5));
    assert_eq!(report["results"][0]["stderr"].as_f64(), Some(0.0));
    assert_eq!(report["results"][0]["method"], "exact");
}

#[test]
fn unknown_group_kind_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let text = MINIMAL.replace(r#""kind": "zn", "n": 2"#, r#""kind": "so3""#);
    let (out, _) = run(&write_scenario(dir.path(), &text), &[]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("group.kind"), "{stderr}");
    assert!(stderr.contains("so3"), "{stderr}");
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (MINIMAL.replace(r#""schema": 1"#, r#""schema": 2"#), "schema"),
        (MINIMAL.replace(r#""functions": ["unit"]"#, r#""functions": ["nope"]"#), "command.functions[0]"),
        (MINIMAL.replace(r#"[["a"]]"#, r#"[["z"]]"#), "subgroupoids.one[0]"),
        (MINIMAL.replace(r#""re": 1"#, r#""re": "x""#), "functions"),
        (MINIMAL.replace(r#""n": 2"#, r#""n": 1"#), "group.n"),
        (MINIMAL.replace(r#""op": "integrate""#, r#""op": "explode""#), "command"),
        ("{".to_string(), "scenario"),
    ];
    for (text, field) in cases {
        let (out, report) = run(&write_scenario(dir.path(), &text), &[]);
        assert_eq!(out.status.code(), Some(2), "{field}");
        assert!(report.is_null());
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains(field), "expected `{field}` in {stderr}");
    }
    let (out, _) = run(&dir.path().join("missing.json"), &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn inconsistent_family_exits_with_one() {
    let (out, report) = run(&bundled("z2-biased-family.json"), &[]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report["pass"], false);
    assert!(report["results"][0]["max_discrepancy"].as_f64().unwrap() >= 0.05);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("`through`") && stderr.contains("`atoms`"), "{stderr}");
}

#[test]
fn reconstruction_reports_atoms_or_the_bad_pair() {
    let (out, report) = run(&bundled("z5-reconstruct.json"), &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report["results"][0]["connection"]["a"], 1);
    assert_eq!(report["results"][0]["connection"]["b"], 3);

    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(bundled("z5-reconstruct.json")).unwrap().replace(r#""through": [4]"#, r#""through": [2]"#);
    let (out, report) = run(&write_scenario(dir.path(), &text), &[]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report["results"][0]["consistent"], false);
}

fn strip_time(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_time");
    v
}

#[test]
fn monte_carlo_reports_are_reproducible() {
    let args = ["--samples", "20000", "--seed", "5", "--workers", "3"];
    let (a, ra) = run(&bundled("su2-character-norm.json"), &args);
    let (b, rb) = run(&bundled("su2-character-norm.json"), &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(serde_json::to_string(&strip_time(ra.clone())).unwrap(), serde_json::to_string(&strip_time(rb)).unwrap());
    assert_eq!(ra["seed"], 5);
    assert_eq!(ra["samples"], 20000);
    assert_eq!(ra["workers"], 3);

    let (_, rc) = run(&bundled("su2-character-norm.json"), &["--samples", "20000", "--seed", "6", "--workers", "3"]);
    assert_ne!(ra["results"][0]["mean"], rc["results"][0]["mean"]);
}

#[test]
fn invariance_scenario_passes_exactly() {
    let (out, report) = run(&bundled("z3-invariance.json"), &[]);
    assert_eq!(out.status.code(), Some(0));
    for e in report["results"].as_array().unwrap() {
        assert_eq!(e["discrepancy"].as_f64(), Some(0.0), "{e}");
    }
}

#[test]
fn gram_scenario_is_the_identity() {
    let (out, report) = run(&bundled("u1-gram.json"), &[]);
    assert_eq!(out.status.code(), Some(0));
    let m = report["results"][0]["matrix"].as_array().unwrap();
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.as_array().unwrap().iter().enumerate() {
            assert_eq!(e["mean"]["re"].as_f64(), Some(if i == j { 1.0 } else { 0.0 }));
        }
    }
}
