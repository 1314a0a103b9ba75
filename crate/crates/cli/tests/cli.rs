use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hellinger_core::hellinger::geodesic_mass;
use hellinger_core::{Measure, ScaleConfig};
use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hellinger"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_value(out: &Output) -> f64 {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    v["value"].as_f64().unwrap()
}

struct Files {
    _dir: TempDir,
    dirac0: PathBuf,
    dirac1: PathBuf,
    mixed: PathBuf,
    negative: PathBuf,
    lambda1: PathBuf,
    lambda4: PathBuf,
    gauss0: PathBuf,
    gauss1: PathBuf,
}

fn files() -> Files {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    Files {
        dirac0: write(d, "a.json", r#"{"type":"discrete","support":[0],"weights":[1.0]}"#),
        dirac1: write(d, "b.json", r#"{"type":"discrete","support":[1],"weights":[1.0]}"#),
        mixed: write(d, "c.json", r#"{"type":"discrete","support":[0,1,"x"],"weights":[0.5,3.0,0.25]}"#),
        negative: write(d, "n.json", r#"{"type":"discrete","support":[0],"weights":[-1.0]}"#),
        lambda1: write(d, "p1.json", "[1.0]"),
        lambda4: write(d, "p4.json", "[4.0]"),
        gauss0: write(d, "g0.json", r#"{"mean":[0.0,0.0],"cov":[[1.0,0.0],[0.0,1.0]]}"#),
        gauss1: write(d, "g1.json", r#"{"mean":[1.0,0.5],"cov":[[2.0,0.3],[0.3,1.0]]}"#),
        _dir: dir,
    }
}

#[test]
fn identical_measures_are_at_distance_zero() {
    let f = files();
    for kind in ["hellinger", "tv", "cone"] {
        let out = run(&["distance", "--kind", kind, "--in", s(&f.mixed), s(&f.mixed)]);
        assert_eq!(json_value(&out), 0.0, "{kind}");
    }
}

#[test]
fn distinct_diracs_are_root_two_apart() {
    let f = files();
    let out = run(&["distance", "--kind", "hellinger", "--in", s(&f.dirac0), s(&f.dirac1)]);
    assert!((json_value(&out) - 2f64.sqrt()).abs() < 1e-15);
    let out = run(&["distance", "--kind", "hellinger", "--sigma", "3", "--in", s(&f.dirac0), s(&f.dirac1)]);
    assert!((json_value(&out) - 3.0 * 2f64.sqrt()).abs() < 1e-14);
}

#[test]
fn poisson_closed_form() {
    let f = files();
    let out = run(&["distance", "--kind", "fr-poisson", "--in", s(&f.lambda1), s(&f.lambda4)]);
    assert!((json_value(&out) - 1.0).abs() < 1e-15);
}

#[test]
fn one_interval_writes_the_two_endpoints() {
    let f = files();
    let out = run(&["geodesic", "--space", "hellinger", "--samples", "1", "--in", s(&f.dirac0), s(&f.mixed)]);
    assert!(out.status.success());
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(Measure::from_json(&rows[0][1]).unwrap(), Measure::from_json(&std::fs::read_to_string(&f.dirac0).unwrap()).unwrap());
    assert_eq!(Measure::from_json(&rows[1][1]).unwrap(), Measure::from_json(&std::fs::read_to_string(&f.mixed).unwrap()).unwrap());
}

#[test]
fn mass_column_follows_the_closed_form() {
    let f = files();
    let dir = TempDir::new().unwrap();
    let csv_path = dir.path().join("geo.csv");
    let out = run(&[
        "geodesic", "--space", "hellinger", "--samples", "8", "--sigma", "2", "--in", s(&f.dirac0), s(&f.mixed),
        "--out", s(&csv_path),
    ]);
    assert!(out.status.success());
    let m0 = Measure::from_json(&std::fs::read_to_string(&f.dirac0).unwrap()).unwrap();
    let m1 = Measure::from_json(&std::fs::read_to_string(&f.mixed).unwrap()).unwrap();
    let cfg = ScaleConfig::new(2.0).unwrap();
    let mut r = csv::Reader::from_path(&csv_path).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["s", "state", "mass", "speed"]);
    let mut n = 0;
    for row in r.records() {
        let row = row.unwrap();
        let t: f64 = row[0].parse().unwrap();
        let mass: f64 = row[2].parse().unwrap();
        assert!((mass - geodesic_mass(&m0, &m1, t, &cfg).unwrap()).abs() < 1e-12);
        n += 1;
    }
    assert_eq!(n, 9);
}

#[test]
fn gaussian_geodesic_conserves_its_invariants() {
    let f = files();
    let out = run(&["geodesic", "--space", "gauss", "--samples", "10", "--in", s(&f.gauss0), s(&f.gauss1)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(r.headers().unwrap().len(), 7);
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 11);
    let h0: f64 = rows[0][4].parse().unwrap();
    let dual0: Vec<f64> = serde_json::from_str(&rows[0][5]).unwrap();
    let moment0: Vec<Vec<f64>> = serde_json::from_str(&rows[0][6]).unwrap();
    for row in &rows {
        let h: f64 = row[4].parse().unwrap();
        let dual: Vec<f64> = serde_json::from_str(&row[5]).unwrap();
        let moment: Vec<Vec<f64>> = serde_json::from_str(&row[6]).unwrap();
        assert!((h - h0).abs() < 1e-8);
        assert!(dual.iter().zip(&dual0).all(|(a, b)| (a - b).abs() < 1e-8));
        assert!(moment.iter().flatten().zip(moment0.iter().flatten()).all(|(a, b)| (a - b).abs() < 1e-8));
    }
}

#[test]
fn fisher_reports_both_matrices() {
    let f = files();
    let out = run(&["fisher", "--family", "poisson", "--at", s(&f.lambda4)]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let closed = v["closed_form"][0][0].as_f64().unwrap();
    let fd = v["finite_difference"][0][0].as_f64().unwrap();
    assert!((closed - 1.0 / 16.0).abs() < 1e-15);
    assert!((fd - closed).abs() < 1e-6 * closed);
}

#[test]
fn unknown_suite_is_a_usage_error() {
    assert_eq!(run(&["verify", "--suite", "geometry"]).status.code(), Some(2));
}

#[test]
fn verification_is_reproducible() {
    let a = run(&["verify", "--suite", "hellinger", "--seed", "11"]);
    let b = run(&["verify", "--suite", "hellinger", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn families_report_carries_the_adjudication_table() {
    let out = run(&["verify", "--suite", "families", "--seed", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("prefactor adjudication"));
    assert!(text.contains("sigma*M/2"));
    assert!(matches!(out.status.code(), Some(0 | 1)));
}

#[test]
fn exit_codes_separate_input_domain_and_convergence_failures() {
    let f = files();
    let missing = f.dirac0.with_file_name("missing.json");
    assert_eq!(run(&["distance", "--kind", "tv", "--in", s(&missing), s(&f.dirac0)]).status.code(), Some(2));
    assert_eq!(run(&["distance", "--kind", "fr-poisson", "--in", s(&f.lambda1), s(&f.gauss0)]).status.code(), Some(2));
    assert_eq!(run(&["distance", "--kind", "fr-numeric", "--in", s(&f.lambda1), s(&f.lambda4)]).status.code(), Some(2));
    assert_eq!(run(&["distance", "--kind", "tv", "--in", s(&f.negative), s(&f.dirac0)]).status.code(), Some(3));
    assert_eq!(run(&["distance", "--kind", "bhattacharyya", "--in", s(&f.mixed), s(&f.dirac0)]).status.code(), Some(3));
    let stalled = run(&[
        "distance", "--kind", "fr-numeric", "--family", "poisson", "--max-iters", "2", "--in", s(&f.lambda1),
        s(&f.lambda4),
    ]);
    assert_eq!(stalled.status.code(), Some(4));
}
