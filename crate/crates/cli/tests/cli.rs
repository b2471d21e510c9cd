use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use num_complex::Complex64;
use serde_json::{json, Value};

fn hosc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hosc")).args(args).output().expect("hosc runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_field(dir: &Path, name: &str, dimension: usize, cutoff: usize, coefficients: &[(f64, f64)]) -> String {
    let path = dir.join(name);
    let body = json!({
        "dimension": dimension,
        "cutoff": cutoff,
        "coefficients": coefficients.iter().map(|&(re, im)| [re, im]).collect::<Vec<_>>(),
    });
    std::fs::write(&path, body.to_string()).unwrap();
    path.to_str().unwrap().to_owned()
}

fn unit(len: usize, at: usize) -> Vec<(f64, f64)> {
    (0..len).map(|i| if i == at { (1.0, 0.0) } else { (0.0, 0.0) }).collect()
}

fn complex(v: &Value) -> Complex64 {
    Complex64::new(v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn norm_of_eigenfunctions() {
    let dir = tempfile::tempdir().unwrap();
    // n = 2, L = 4: levels 2 and 4, index 1 is φ_[0,1].
    let e = write_field(dir.path(), "e.json", 2, 4, &unit(3, 1));
    for (spec, want) in [("Lp:p=2", 1.0), ("TL:r=0,p=2,q=2", 1.0), ("SobolevH2:s=1", 2.0)] {
        let out = hosc(&["norm", "--field", &e, "--spec", spec]);
        assert!(out.status.success(), "{spec}");
        let got: f64 = stdout(&out).trim().parse().unwrap();
        assert!((got - want).abs() < 1e-12, "{spec}: {got}");
    }
    let out = hosc(&["norm", "--field", &e, "--spec", "Lp:p=0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hosc(&["norm", "--field", &e, "--spec", "Bogus:p=2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oscillator_returns_after_a_full_period() {
    let dir = tempfile::tempdir().unwrap();
    let coefficients = [(0.3, -0.1), (0.0, 0.5), (1.2, 0.0), (-0.4, 0.2), (0.1, 0.1), (0.0, -0.7)];
    let f = write_field(dir.path(), "f.json", 1, 11, &coefficients);
    let out = hosc(&["propagate", "--field", &f, "--evolution", "oscillator", "--t", "6.283185307179586", "--spectral"]);
    assert!(out.status.success());
    let evolved: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let got = evolved["coefficients"].as_array().unwrap();
    // e^{−2πi(2k+n)} = 1
    for (c, &(re, im)) in got.iter().zip(&coefficients) {
        assert!((complex(c) - Complex64::new(re, im)).norm() < 1e-12);
    }
}

#[test]
fn heat_damps_each_level() {
    let dir = tempfile::tempdir().unwrap();
    // φ_2 in one dimension has eigenvalue 5.
    let f = write_field(dir.path(), "f.json", 1, 7, &unit(4, 2));
    let out = hosc(&["propagate", "--field", &f, "--evolution", "heat", "--t", "0.5", "--spectral"]);
    assert!(out.status.success());
    let evolved: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let c = complex(&evolved["coefficients"][2]);
    assert!((c.re - (-2.5f64).exp()).abs() < 1e-15 && c.im == 0.0);
    let out = hosc(&["propagate", "--field", &f, "--evolution", "heat", "--t=-0.5", "--spectral"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn free_gaussian_samples_match_the_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_field(dir.path(), "f.json", 1, 9, &unit(5, 0));
    let out = hosc(&["propagate", "--field", &f, "--evolution", "free", "--t", "0.3"]);
    assert!(out.status.success());
    let body: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let points = body["space_points"].as_array().unwrap();
    let values = body["values"].as_array().unwrap();
    assert_eq!(points.len(), values.len());
    let z = Complex64::new(1.0, 0.6);
    for (p, v) in points.iter().zip(values) {
        let x = p[0].as_f64().unwrap();
        let want = PI.powf(-0.25) * z.powf(-0.5) * (-(x * x) / (2.0 * z)).exp();
        assert!((complex(v) - want).norm() < 1e-8, "x = {x}");
    }
}

#[test]
fn periodic_steps_record_the_horizon() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_field(dir.path(), "f.json", 1, 5, &unit(3, 1));
    let cfg = dir.path().join("cfg.json");
    let out = hosc(&[
        "propagate", "--field", &f, "--evolution", "oscillator", "--steps", "8",
        "--write-config", cfg.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let body: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(body["time_nodes"].as_array().unwrap().len(), 8);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&cfg).unwrap()).unwrap();
    assert_eq!(written["steps"], 8);
    assert!((written["horizon"].as_f64().unwrap() - 2.0 * PI).abs() < 1e-15);
}

#[test]
fn sweep_tabulates_each_cutoff_deterministically() {
    let args = ["sweep", "--suite", "lemma-t1", "--cutoff", "8,12,16", "--trials", "20"];
    let a = hosc(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "suite,p,q,s,cutoff,c_hat,stable");
    assert_eq!(lines.len(), 4);
    for (line, cutoff) in lines[1..].iter().zip(["8", "12", "16"]) {
        assert_eq!(line.split(',').nth(4), Some(cutoff));
    }
    assert_eq!(stdout(&hosc(&args)), text);
}

#[test]
fn empty_grids_are_rejected() {
    let out = hosc(&["sweep", "--suite", "lemma-t1", "--p", ""]);
    assert_eq!(out.status.code(), Some(2));
    let out = hosc(&["sweep", "--suite", "identity-sqrt2pi"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_files_and_flags_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        json!({"subcommand": "verify", "suite": "mehler-oracle", "t": "0.5", "cutoffs": [40]}).to_string(),
    )
    .unwrap();
    let from_config = hosc(&["verify", "--config", cfg.to_str().unwrap()]);
    let from_flags = hosc(&["verify", "--suite", "mehler-oracle", "--t", "0.5", "--cutoff", "40"]);
    assert!(from_config.status.success() && from_flags.status.success());
    assert_eq!(from_config.stdout, from_flags.stdout);
    // Flags override the file.
    let overridden = hosc(&["verify", "--config", cfg.to_str().unwrap(), "--cutoff", "30"]);
    let report: Value = serde_json::from_slice(&overridden.stdout).unwrap();
    assert_eq!(report["params"]["cutoffs"], "30");
}

#[test]
fn written_configs_reproduce_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("resolved.json");
    let first = hosc(&[
        "verify", "--suite", "multiplier-norm", "--trials", "5", "--seed", "9",
        "--write-config", cfg.to_str().unwrap(),
    ]);
    assert!(first.status.success());
    let replay = hosc(&["verify", "--config", cfg.to_str().unwrap()]);
    assert!(replay.status.success());
    assert_eq!(first.stdout, replay.stdout);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&cfg).unwrap()).unwrap();
    assert_eq!(written["subcommand"], "verify");
    assert_eq!(written["trials"], 5);
}

#[test]
fn csv_reports_have_one_row_per_record() {
    let out = hosc(&["verify", "--suite", "identity-sqrt2pi", "--trials", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("suite,trial,cutoff,label,lhs,rhs,ratio,ok"));
    assert!(lines.all(|l| l.starts_with("identity-sqrt2pi,") && l.ends_with(",true")));
}

#[test]
fn unknown_suites_exit_two() {
    let out = hosc(&["verify", "--suite", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}
