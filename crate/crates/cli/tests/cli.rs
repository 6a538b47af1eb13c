use std::path::PathBuf;
use std::process::Command;

use regdom_cli::demo::DemoReport;
use regdom_cli::{run_args, Envelope, Output, EXIT_INPUT, EXIT_OK};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    run_args(std::iter::once("regdom").chain(args.iter().copied()))
}

fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    let env: Envelope<Value> = serde_json::from_str(&out.stdout).unwrap();
    env.report
}

#[test]
fn identity_coupled_block_block_is_cone_dominant() {
    let r = report(&["--deterministic", "dominance", "--matrix", &fixture("a11.json"), "--region", "cone:alpha=0,theta=0.785398"]);
    assert_eq!(r["verdict"], "holds");
}

#[test]
fn stable_block_reduced_matrix_is_not_cone_dominant() {
    let out = run(&["--deterministic", "dominance", "--matrix", &fixture("ahat.json"), "--region", "cone:alpha=0,theta=0.785398"]);
    // A negative verdict is still a computed verdict.
    assert_eq!(out.code, EXIT_OK);
    let env: Envelope<Value> = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(env.report["verdict"], "fails");
}

#[test]
fn input_errors_exit_2() {
    let out = run(&["dominance", "--matrix", &fixture("empty.json"), "--region", "half-plane:alpha=0"]);
    assert_eq!(out.code, EXIT_INPUT);
    let out = run(&["dominance", "--matrix", &fixture("a11.json"), "--region", "circle:r=1"]);
    assert_eq!(out.code, EXIT_INPUT);
    let out = run(&["dominance", "--matrix", &fixture("missing.json"), "--region", "half-plane:alpha=0"]);
    assert_eq!(out.code, EXIT_INPUT);
    let out = run(&["fractional", "--matrix", &fixture("a11.json"), "--gamma", "2.5"]);
    assert_eq!(out.code, EXIT_INPUT);
    let out = run(&["bogus"]);
    assert_eq!(out.code, EXIT_INPUT);
}

#[test]
fn inverse_pair_routh_hurwitz_is_stable() {
    let a = fixture("inverse_pair_a.json");
    let r = report(&["--deterministic", "second-order", "--A", &a, "--B", &fixture("inverse_pair_b_exact.json"), "--alpha", "0", "--method", "rh"]);
    assert_eq!(r["stable"], true);
    assert!(r["cites"].as_array().unwrap().iter().any(|c| c == "Thm-RH"));

    // Printed four-digit entries commute only to about 1e-5.
    let b = fixture("inverse_pair_b.json");
    let out = run(&["second-order", "--A", &a, "--B", &b, "--method", "rh"]);
    assert_eq!(out.code, EXIT_INPUT);
    let r = report(&["second-order", "--A", &a, "--B", &b, "--method", "rh", "--comm-tol", "1e-4"]);
    assert_eq!(r["stable"], true);
}

#[test]
fn inverse_pair_other_methods() {
    let a = fixture("inverse_pair_a.json");
    let b = fixture("inverse_pair_b.json");
    let r = report(&["second-order", "--A", &a, "--B", &b, "--method", "spectrum"]);
    assert_eq!(r["stable"], true);
    assert_eq!(r["roots"].as_array().unwrap().len(), 4);
    let r = report(&["second-order", "--A", &a, "--B", &b, "--method", "sufficient"]);
    assert_eq!(r["verdict"], "pass");
    let out = run(&["--format", "csv", "second-order", "--A", &a, "--B", &b]);
    assert_eq!(out.stdout.lines().count(), 5);
    assert_eq!(out.stdout.lines().next(), Some("re,im"));
    let r = report(&["second-order", "--A", &a, "--B", &b, "--method", "perturb", "--d", "2,0.5", "--form", "form1"]);
    assert!(r["spectrum"].is_object());
    let r = report(&["second-order", "--A", &a, "--B", &b, "--method", "perturb", "--form", "form1", "--trials", "200"]);
    assert!(r["sampling"].is_object());
    let out = run(&["second-order", "--A", &a, "--B", &b, "--method", "relative"]);
    assert_eq!(out.code, EXIT_INPUT);
}

#[test]
fn identity_coupled_block_corollary_passes() {
    let r = report(&["--deterministic", "fractional", "--matrix", &fixture("identity_coupled_block.json"), "--gamma", "0.5", "--check", "corollary"]);
    assert_eq!(r["verdict"], "pass");
    assert!((r["theta"].as_f64().unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    assert_eq!(r["args"].as_array().unwrap().len(), 4);
}

#[test]
fn stable_block_fractional_checks() {
    let m = fixture("stable_block.json");
    let r = report(&["fractional", "--matrix", &m, "--gamma", "0.5", "--check", "sector"]);
    assert_eq!(r["verdict"], "inconclusive");
    let r = report(&["fractional", "--matrix", &m, "--gamma", "0.5"]);
    assert_eq!(r["verdict"], "stable");
    let r = report(&["fractional", "--matrix", &m, "--gamma", "0.5", "--check", "reduce"]);
    assert!(r["max_root_distance"].as_f64().unwrap() < 1e-10);
}

#[test]
fn sampling_is_deterministic() {
    let args = ["--deterministic", "sample", "--matrix", &fixture("m.json"), "--region", "half-plane:alpha=0", "--class", "all", "--trials", "1000", "--seed", "42"];
    let first = run(&args);
    assert_eq!(first.code, EXIT_OK);
    assert_eq!(first, run(&args));
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "3"]);
    assert_eq!(first, run(&threaded));
}

#[test]
fn timestamp_only_without_deterministic() {
    let args = ["region", "--region", "hyperbola:a=3,b=1"];
    let env: Envelope<Value> = serde_json::from_str(&run(&args).stdout).unwrap();
    assert!(env.timestamp.is_some());
    let det: Envelope<Value> = serde_json::from_str(&run(&[&["--deterministic"], &args[..]].concat()).stdout).unwrap();
    assert!(det.timestamp.is_none());
    assert_eq!(env.report, det.report);
}

#[test]
fn demo_round_trips_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["--deterministic", "demo", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK);
    let env: Envelope<DemoReport> = serde_json::from_str(&out.stdout).unwrap();
    assert!(env.report.max_locus_residual < 1e-9);
    assert!(env.report.all_in_closure);
    assert_eq!(serde_json::to_string_pretty(&env).unwrap() + "\n", out.stdout);

    let poles = std::fs::read_to_string(dir.path().join("poles.csv")).unwrap();
    assert_eq!(poles.lines().count(), 1 + 2 * 21);
    let boundary = std::fs::read_to_string(dir.path().join("boundary.csv")).unwrap();
    assert_eq!(boundary.lines().count(), 513);
}

#[test]
fn reports_reparse() {
    let cases: Vec<Vec<String>> = vec![
        vec!["dominance".into(), "--matrix".into(), fixture("identity_coupled_block.json"), "--region".into(), "parabola:eps=2".into()],
        vec!["spectrum".into(), "--matrix".into(), fixture("identity_coupled_block.json"), "--certificate".into()],
        vec!["fractional".into(), "--matrix".into(), fixture("identity_coupled_block.json"), "--gamma".into(), "0.4".into(), "--check".into(), "family".into(), "--trials".into(), "100".into()],
        vec!["fractional".into(), "--matrix".into(), fixture("identity_coupled_block.json"), "--gamma".into(), "1.2".into(), "--check".into(), "high-gamma".into(), "--trials".into(), "100".into()],
        vec!["second-order".into(), "--A".into(), fixture("scalar_a.json"), "--B".into(), fixture("a11.json"), "--method".into(), "form2".into(), "--decay".into(), "0.5".into(), "--trials".into(), "100".into()],
        vec!["second-order".into(), "--A".into(), fixture("a11.json"), "--B".into(), fixture("a11.json"), "--method".into(), "t2".into()],
    ];
    for args in cases {
        let mut full = vec!["--deterministic"];
        full.extend(args.iter().map(String::as_str));
        let out = run(&full);
        assert_eq!(out.code, EXIT_OK, "{args:?}: {}", out.stdout);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(again, v, "{args:?}");
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_regdom");
    let ok = Command::new(bin)
        .args(["--format", "text", "dominance", "--matrix", &fixture("a11.json"), "--region", "half-plane:alpha=0"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("Holds"));
    let bad = Command::new(bin)
        .args(["dominance", "--matrix", &fixture("empty.json"), "--region", "half-plane:alpha=0"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
}
