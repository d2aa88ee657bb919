use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const E1E2: &str = r#"{"target":{"dim":2,"norm":"l2"},"atom_vectors":[[1,0],[0,1]],"atoms":["a1","a2"]}"#;

fn orlicz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orlicz")).args(args).output().unwrap()
}

fn json_ok(args: &[&str]) -> Value {
    let out = orlicz(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    doc(&out)
}

fn doc(out: &Output) -> Value {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert_eq!(text.lines().count(), 1);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["v"], 1);
    v
}

fn value(v: &Value) -> f64 {
    v["value"].as_f64().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn semivariation_of_orthonormal_atoms() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", E1E2);
    let v = json_ok(&["semivar", "--measure", &m, "--set", r#"["a1","a2"]"#]);
    assert!((value(&v) - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn luxemburg_of_three_four_is_five() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f34.json", "[3,4]");
    let v = json_ok(&[
        "luxemburg", "--base", r#"{"kind":"l1mu"}"#, "--phi", r#"{"kind":"power","p":2}"#, "--fn", &f,
    ]);
    assert!((value(&v) - 5.0).abs() < 1e-9);
    assert!((v["modular"].as_f64().unwrap() - 25.0).abs() < 1e-12);
}

#[test]
fn zero_function_has_zero_norm() {
    let v = json_ok(&["norm", "--space", r#"{"kind":"linf"}"#, "--fn", "[0,0,0]"]);
    assert_eq!(value(&v), 0.0);
}

#[test]
fn distfn_csv_rectangles_sum_to_the_norm() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("d.csv");
    let svg = dir.path().join("d.svg");
    let v = json_ok(&[
        "distfn", "--measure", E1E2, "--fn", "[2,1]",
        "--csv", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap(),
    ]);
    assert!((value(&v) - (1.0 + 2f64.sqrt())).abs() < 1e-12);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,value"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (t, y) = l.split_once(',').unwrap();
            (t.parse().unwrap(), y.parse().unwrap())
        })
        .collect();
    let sum: f64 = rows.windows(2).map(|w| (w[1].0 - w[0].0) * w[0].1).sum();
    assert!((sum - value(&v)).abs() <= 1e-12);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn calderon_of_l1_and_linf_at_one_half() {
    let v = json_ok(&[
        "calderon", "--x0", r#"{"kind":"l1mu"}"#, "--x1", r#"{"kind":"linf"}"#,
        "--theta", "0.5", "--fn", "[1,2,3]", "--method", "grid-oracle",
    ]);
    assert!((value(&v) - 14f64.sqrt()).abs() < 1e-9);
    assert_eq!(v["f0"].as_array().unwrap().len(), 3);
}

#[test]
fn interpolating_t_and_t_cubed() {
    let v = json_ok(&[
        "interpolate", "--base", r#"{"kind":"l1mu"}"#,
        "--phi0", r#"{"kind":"power","p":1}"#, "--phi1", r#"{"kind":"power","p":3}"#,
        "--theta", "0.5", "--fn", "[1,1]", "--trials", "300",
    ]);
    assert!((v["power_exponent"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    // ‖(1,1)‖ in L^{3/2} with unit weights
    assert!((value(&v) - 2f64.powf(2.0 / 3.0)).abs() < 1e-9);
}

#[test]
fn out_flag_writes_the_document() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let run = orlicz(&["norm", "--space", r#"{"kind":"l1mu"}"#, "--fn", "[1,-2]", "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    assert!(run.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["v"], 1);
    assert_eq!(value(&v), 3.0);
}

#[test]
fn exit_codes() {
    let bad_json = orlicz(&["norm", "--space", r#"{"kind":"nope"}"#, "--fn", "[1]"]);
    assert_eq!(bad_json.status.code(), Some(2));
    assert!(!bad_json.stderr.is_empty());
    let missing = orlicz(&["norm", "--space", r#"{"kind":"l1mu"}"#, "--fn", "/nonexistent/f.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let domain = orlicz(&[
        "luxemburg", "--base", r#"{"kind":"l1mu"}"#, "--phi", r#"{"kind":"power","p":0.5}"#, "--fn", "[1]",
    ]);
    assert_eq!(domain.status.code(), Some(3));
    let null_atom = orlicz(&[
        "calderon", "--x0", r#"{"kind":"l1w","measure":{"target":{"dim":1,"norm":"l1"},"atom_vectors":[[0],[1]]}}"#,
        "--x1", r#"{"kind":"l1mu"}"#, "--theta", "0.5", "--fn", "[1,1]",
    ]);
    assert_eq!(null_atom.status.code(), Some(3));
    let unknown = orlicz(&["verify", "--filter", "no-such-check"]);
    assert_eq!(unknown.status.code(), Some(3));
}

#[test]
fn verify_reports_are_reproducible() {
    let args = ["verify", "orlicz", "--suite", "lemmas", "--seed", "7", "--budget", "5"];
    let a = orlicz(&args);
    let b = orlicz(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = doc(&a);
    let report = &v["value"];
    assert_eq!(report["pass"], true);
    for verdict in report["verdicts"].as_array().unwrap() {
        assert_eq!(verdict["group"], "orlicz");
        assert_eq!(verdict["instances"], 5);
        assert!(verdict["inputs_digest"].as_str().unwrap().len() == 64);
    }
}

#[test]
fn replay_matches_the_suite_instance() {
    let v = json_ok(&["verify", "--replay", "sv-bnb", "--seed", "3", "--index", "4"]);
    let rec = &v["value"];
    assert_eq!(rec["index"], 4);
    assert_eq!(rec["pass"], true);
    let again = json_ok(&["verify", "--replay", "sv-bnb", "--seed", "3", "--index", "4"]);
    assert_eq!(v, again);
}

#[test]
fn thread_cap_does_not_change_results() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_orlicz"))
            .env("ORLICZ_THREADS", threads)
            .args(["verify", "--filter", "lem-*", "--seed", "1", "--budget", "3"])
            .output()
            .unwrap()
    };
    let one = run("1");
    let two = run("2");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, two.stdout);
    assert_eq!(run("zero").status.code(), Some(2));
}

#[test]
fn emitted_documents_reparse() {
    let listing = json_ok(&["verify", "--list"]);
    assert!(listing["value"].as_array().unwrap().len() >= 30);
    let lux = json_ok(&[
        "luxemburg", "--base", r#"{"kind":"power","base":{"kind":"l1mu"},"s":0.5}"#,
        "--phi", r#"{"kind":"power","p":1}"#, "--fn", "[3,4]",
    ]);
    let text = serde_json::to_string(&lux).unwrap();
    assert_eq!(serde_json::from_str::<Value>(&text).unwrap(), lux);
    assert!((value(&lux) - 5.0).abs() < 1e-9);
}
