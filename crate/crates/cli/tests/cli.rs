use std::path::Path;
use std::process::{Command, Output};

fn loewner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loewner"))
        .args(args)
        .env_remove("LOEWNER_SEED")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn report(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn strip_timing(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(map) => {
            map.remove("wall_time");
            map.values_mut().for_each(strip_timing);
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

#[test]
fn demos_exit_zero() {
    for case in ["moore-penrose", "det-shift", "transpose"] {
        let o = loewner(&["demo", "--case", case]);
        assert_eq!(code(&o), 0, "{case}: {}", stdout(&o));
        assert!(stdout(&o).contains("image PSD false"));
    }
}

#[test]
fn verify_passes_a_real_suite() {
    let o = loewner(&["verify", "--suite", "cdj", "--seed", "1", "--trials", "100"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("failures    0"));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let o = loewner(&["verify", "--suite", "nope", "--trials", "1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("nope"));
}

#[test]
fn broken_suite_fails_with_a_populated_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = loewner(&[
        "verify", "--suite", "selftest-broken", "--trials", "5", "--dims", "2,3",
        "--report", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL selftest-broken"));
    let r = report(&path);
    let failures = r["failures"].as_array().unwrap();
    assert_eq!(failures.len(), 10);
    for f in failures {
        assert!(f["margin"].as_f64().unwrap() < 0.0);
        assert!(f["instance_digest"].as_str().is_some_and(|d| !d.is_empty()));
    }
}

#[test]
fn geometric_mean_of_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let out = dir.path().join("g.json");
    std::fs::write(&a, r#"{"rows":2,"cols":2,"data":[[1,0],[0,4]]}"#).unwrap();
    std::fs::write(&b, r#"{"rows":2,"cols":2,"data":[[4,0],[0,1]]}"#).unwrap();
    let o = loewner(&[
        "mean", "--kind", "geometric", a.to_str().unwrap(), b.to_str().unwrap(), "-o", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let g = loewner::linalg::ComplexMatrix::from_json_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let expected = loewner::linalg::ComplexMatrix::from_diagonal(&[2.0, 2.0]);
    assert!(g.max_abs_diff(&expected) < 1e-12);
}

#[test]
fn mean_of_missing_file_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let out = dir.path().join("o.json");
    let m = missing.to_str().unwrap();
    let o = loewner(&["mean", "--kind", "harmonic", m, m, "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn falsify_matches_claimed_grades() {
    let o = loewner(&["falsify", "--map", "transpose:2", "--grade", "two", "--trials", "50"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("witness found"));

    let o = loewner(&["falsify", "--map", "pinching:1|2", "--grade", "two", "--trials", "200"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("no witness"));

    let o = loewner(&["falsify", "--map", "pinching:1|2", "--grade", "two", "--trials", "20", "--expect", "found"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn bad_map_spec_is_a_usage_error() {
    for map in ["frobnicate", "det-shift:x", "pinching:1|1"] {
        let o = loewner(&["falsify", "--map", map, "--grade", "two", "--trials", "1"]);
        assert_eq!(code(&o), 2, "{map}");
    }
    let o = loewner(&["falsify", "--map", "transpose", "--grade", "three"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn seed_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let p = path.to_str().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_loewner"))
        .args(["verify", "--suite", "cdj", "--trials", "3", "--dims", "2", "--report", p])
        .env("LOEWNER_SEED", "4242")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(report(&path)["master_seed"].as_u64(), Some(4242));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut runs = Vec::new();
    for k in 0..2 {
        let path = dir.path().join(format!("r{k}.json"));
        let o = loewner(&[
            "verify", "--suite", "all", "--seed", "9", "--trials", "4", "--dims", "2,3",
            "--report", path.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        let mut v = report(&path);
        strip_timing(&mut v);
        runs.push(v);
    }
    assert_eq!(runs[0], runs[1]);
}
