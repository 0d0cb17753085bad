use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn rings() -> (TempDir, PathBuf, PathBuf, PathBuf, PathBuf) {
    let dir = TempDir::new().unwrap();
    let cross = write(&dir, "cross.json", r#"{"n": 2, "generators": ["x1*x2"]}"#);
    let circle = write(&dir, "circle.json", r#"{"n": 2, "generators": ["x1^2 + x2^2 - 1"]}"#);
    let free3 = write(&dir, "free3.json", r#"{"n": 3}"#);
    let plane = write(&dir, "plane.json", r#"{"n": 2, "generators": []}"#);
    (dir, cross, circle, free3, plane)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cinfty")).args(args).env("CINFTY_THREADS", "2").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn ring_summaries() {
    let (_d, cross, _, free3, _) = rings();
    let out = run(&["ring", "--ring", p(&cross), "--json", "--quiet"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["details"]["kaehler"]["rank"], 2);
    assert_eq!(v["details"]["kaehler"]["relations"].as_array().unwrap().len(), 1);
    let v = json(&run(&["ring", "--ring", p(&free3), "--json", "--quiet"]));
    assert_eq!(v["details"]["kaehler"]["rank"], 3);
    assert!(v["details"]["kaehler"]["relations"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"n": 2, "generators": ["x1 *"]}"#);
    assert_eq!(run(&["ring", "--ring", p(&bad)]).status.code(), Some(2));
    assert_eq!(run(&["ring", "--ring", "/nonexistent/ring.json"]).status.code(), Some(2));
}

#[test]
fn identity_suites() {
    let (_d, cross, _, free3, _) = rings();
    let v = json(&run(&["identities", "--ring", p(&free3), "--trials", "50", "--json", "--quiet"]));
    assert_eq!(v["pass"], true);
    for law in v["details"].as_array().unwrap() {
        assert_eq!(law["proved"], 50, "{law}");
    }
    let out = run(&["identities", "--ring", p(&cross), "--trials", "20", "--json", "--quiet"]);
    assert!(out.status.success());
    let v = json(&run(&["identities", "--ring", p(&cross), "--trials", "0", "--json", "--quiet"]));
    assert_eq!(v["pass"], true);
    assert!(v["details"].as_array().unwrap().iter().all(|l| l["trials"] == 0));
}

#[test]
fn psi_reports() {
    let (_d, cross, _, _, plane) = rings();
    let v = json(&run(&["psi", "--ring", p(&cross), "--form", "x1 * dx2", "--json", "--quiet"]));
    assert_eq!(v["details"]["witness"], true);
    assert_eq!(v["details"]["in_J"]["verdict"], "NotMemberUpToDegree");
    let v = json(&run(&["psi", "--ring", p(&plane), "--form", "dx1", "--json", "--quiet"]));
    assert_eq!(v["details"]["witness"], false);
    let v = json(&run(&["psi", "--ring", p(&cross), "--form", "x1 * dx2", "--degree-bound", "0", "--json", "--quiet"]));
    assert_eq!(v["details"]["degree_bound"], 0);
}

#[test]
fn stokes_cases() {
    let (_d, _, circle, _, plane) = rings();
    let v = json(&run(&["stokes", "--ring", p(&plane), "--sigma", "t1,t2", "--gamma", "x1 * dx2", "--json", "--quiet"]));
    assert!((v["details"]["lhs"].as_f64().unwrap() - 0.5).abs() <= 1e-8);
    assert!(v["details"]["residual"].as_f64().unwrap() <= 1e-8);
    // exact γ = d(x1 x2²)
    let v = json(&run(&["stokes", "--ring", p(&plane), "--sigma", "t1 + t2^2, t2", "--gamma", "x2^2 * dx1 + 2*x1*x2 * dx2", "--json", "--quiet"]));
    assert!(v["details"]["residual"].as_f64().unwrap() <= 1e-8);
    assert!(v["details"]["lhs"].as_f64().unwrap().abs() <= 1e-12);
    let out = run(&["stokes", "--ring", p(&circle), "--sigma", "cos(2*pi*t1), sin(2*pi*t1)", "--gamma", "x1*x2", "--tol", "1e-6", "--json", "--quiet"]);
    assert!(out.status.success());
    let out = run(&["stokes", "--ring", p(&plane), "--sigma", "t1,t2", "--gamma", "x1 * dx1^dx2"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["stokes", "--ring", p(&circle), "--sigma", "t1, 0", "--gamma", "x1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn same_seed_same_report() {
    let (_d, _, circle, _, _) = rings();
    let strip = |out: Output| {
        let mut v = json(&out);
        v.as_object_mut().unwrap().remove("wall_time_ms");
        serde_json::to_string(&v).unwrap()
    };
    let args = ["identities", "--ring", p(&circle), "--trials", "5", "--seed", "9", "--json", "--quiet"];
    assert_eq!(strip(run(&args)), strip(run(&args)));
}

#[test]
fn sheaf_demo() {
    let dir = TempDir::new().unwrap();
    let space = write(
        &dir,
        "space.json",
        r#"{"ring": {"n": 2, "generators": ["x1^2 + x2^2 - 1"]}, "box": [[-2, 2], [-2, 2]],
            "opens": [{"positivity": ["x1 + 3/10"]}, {"positivity": ["-1/2*x1 + 433/500*x2 + 3/10"]},
                      {"positivity": ["-1/2*x1 - 433/500*x2 + 3/10"]}], "seed": 4}"#,
    );
    let v = json(&run(&["sheaf", "--space", p(&space), "--section", "2 + x1*x2", "--point", "1, 0", "--json", "--quiet"]));
    assert_eq!(v["pass"], true, "{v}");
    assert_eq!(v["details"]["certificate"]["max_disagreement"], 0.0);
    let out = run(&["sheaf", "--space", p(&space), "--section", "x2", "--point", "1, 0"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn selfcheck_subset() {
    let v = json(&run(&["selfcheck", "--only", "6,7", "--json", "--quiet"]));
    assert_eq!(v["pass"], true);
    assert_eq!(v["verdicts"].as_array().unwrap().len(), 2);
    assert_eq!(run(&["selfcheck", "--only", "12"]).status.code(), Some(2));
}
