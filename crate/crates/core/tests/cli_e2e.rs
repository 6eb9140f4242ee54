use std::path::Path;
use std::process::Command;

use serde_json::Value;

const SPHERE: &str = r#"{"K":1,"family":"power","gamma":0.5,"lambda":1,"z0":[0,0]}"#;
const LUNE: &str = r#"{"poles":[{"q":0,"alpha":0.375,"beta":0}]}"#;

fn run(out: &Path, args: &[&str]) -> (i32, Option<Value>) {
    let o = Command::new(env!("CARGO_BIN_EXE_liouville")).args(args).arg("--out").arg(out).output().expect("spawn");
    let report = std::fs::read_to_string(out.join("report.json")).ok().map(|s| serde_json::from_str(&s).unwrap());
    (o.status.code().expect("exit code"), report)
}

fn fresh() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

#[test]
fn exit_code_matrix() {
    let cases: &[(&[&str], i32, Option<&str>)] = &[
        (&["canonical", "validate", "--params", SPHERE], 0, Some("pass")),
        (&["canonical", "eval", "--params", SPHERE, "--at", "0.5", "1"], 0, Some("pass")),
        (&["canonical", "constants", "--params", SPHERE], 0, Some("pass")),
        (&["canonical", "synthesize", "--K", "0", "--c1", "-1", "--c2", "0.5"], 0, Some("pass")),
        (&["canonical", "synthesize", "--K", "-1", "--c1", "1", "--c2", "1"], 2, Some("negative")),
        (&["canonical", "validate", "--params", r#"{"K":1,"family":"power","gamma":-1,"lambda":1,"z0":[0,0]}"#], 2, Some("negative")),
        (&["canonical", "verify", "--params", SPHERE, "--tol", "1e-30"], 1, Some("fail")),
        (&["schwarzian", "validate", "--spec", LUNE], 0, Some("pass")),
        (&["schwarzian", "eval", "--spec", LUNE, "--at", "0.5", "1"], 0, Some("pass")),
        (&["develop", "solve-global", "--c", "0.375"], 0, Some("pass")),
        (&["polygon", "fit", "--q", "-1", "1", "--alpha", "0.25", "0.25", "--target-alpha-inf", "0.3"], 0, Some("pass")),
        (&["polygon", "check", "--spec", r#"{"poles":[{"q":0,"alpha":0.7,"beta":0}]}"#], 2, Some("negative")),
        (&["canonical", "validate", "--params", "{not json"], 64, None),
        (&["canonical", "validate", "--params", "/nonexistent/params.json"], 64, None),
        (&["canonical", "synthesize", "--K", "2", "--c1", "0", "--c2", "0"], 64, None),
        (&["canonical", "verify", "--params", SPHERE, "--tol", "-1"], 64, None),
        (&["bogus"], 64, None),
    ];
    for (args, code, status) in cases {
        let dir = fresh();
        let (got, report) = run(dir.path(), args);
        assert_eq!(got, *code, "{args:?}");
        if let Some(s) = status {
            let r = report.unwrap_or_else(|| panic!("{args:?}: no report"));
            assert_eq!(r["status"], *s, "{args:?}");
            assert!(r["command"].is_string());
        }
    }
}

#[test]
fn help_and_version_exit_zero() {
    for flag in ["--help", "--version"] {
        let o = Command::new(env!("CARGO_BIN_EXE_liouville")).arg(flag).output().unwrap();
        assert_eq!(o.status.code(), Some(0), "{flag}");
    }
}

#[test]
fn artifacts_are_written() {
    let dir = fresh();
    assert_eq!(run(dir.path(), &["canonical", "verify", "--params", SPHERE]).0, 0);
    for f in ["report.json", "field.csv"] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
    let csv = std::fs::read_to_string(dir.path().join("field.csv")).unwrap();
    assert!(csv.starts_with("s,t,v,ev\n") && csv.lines().count() > 100);

    let dir = fresh();
    let spec = dir.path().join("spec.json");
    std::fs::write(&spec, LUNE).unwrap();
    let (code, report) = run(dir.path(), &["polygon", "check", "--spec", spec.to_str().unwrap()]);
    assert_eq!(code, 0);
    for f in ["report.json", "polygon.json", "boundary.csv", "certificate.json"] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
    let verdicts = report.unwrap()["verdicts"].as_array().unwrap().clone();
    assert!(verdicts.iter().all(|v| v["pass"] == true), "{verdicts:?}");
    let poly: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("polygon.json")).unwrap()).unwrap();
    assert_eq!(poly["polygon"]["arcs"].as_array().unwrap().len(), 2);
}

#[test]
fn output_is_deterministic() {
    let strip = |v: &mut Value| {
        v.as_object_mut().unwrap().remove("timestamp");
    };
    let (a, b) = (fresh(), fresh());
    let args = ["canonical", "verify", "--params", SPHERE, "--seed", "5"];
    let (_, mut ra) = run(a.path(), &args);
    let (_, mut rb) = run(b.path(), &args);
    strip(ra.as_mut().unwrap());
    strip(rb.as_mut().unwrap());
    assert_eq!(ra, rb);
    let fa = std::fs::read(a.path().join("field.csv")).unwrap();
    let fb = std::fs::read(b.path().join("field.csv")).unwrap();
    assert_eq!(fa, fb);
}
