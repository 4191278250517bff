//! End-to-end checks of the command-line interface.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qwalk"))
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qwalk-cli-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

#[test]
fn walk_csv_matches_library() {
    let dir = tmpdir("walk");
    let out = dir.join("walk.csv");
    let status = run(&[
        "walk",
        "--positions",
        "4",
        "--steps",
        "8",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success());

    let series = qwalk::walk::eg_series(
        qwalk::walk::WalkConfig::circle(4).unwrap(),
        qwalk::walk::CoinInitialState::minus(),
        8,
        qwalk::walk::WalkPartition::Full,
    )
    .unwrap();
    let body = fs::read_to_string(&out).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("step,e_g"));
    for (n, line) in lines.enumerate() {
        let (step, value) = line.split_once(',').unwrap();
        assert_eq!(step.parse::<usize>().unwrap(), n);
        assert_eq!(value.parse::<f64>().unwrap(), series[n], "row {n}");
    }
}

#[test]
fn manifest_reproduces_output_bit_exact() {
    let dir = tmpdir("manifest");
    let out = dir.join("ens.csv");
    let args = [
        "ensemble",
        "--mode",
        "wstate",
        "--modes",
        "8,16",
        "--samples",
        "40",
        "--seed",
        "31415",
        "--out",
        out.to_str().unwrap(),
    ];
    assert!(run(&args).status.success());
    let first = fs::read(&out).unwrap();
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("ens.csv.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["subcommand"], "ensemble");
    assert_eq!(manifest["parameters"]["seed"], 31415);
    assert_eq!(manifest["parameters"]["samples"], 40);

    // rebuild the invocation from the manifest alone
    let p = &manifest["parameters"];
    let modes: Vec<String> = p["modes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m.to_string())
        .collect();
    let rerun = run(&[
        "ensemble",
        "--mode",
        p["mode"].as_str().unwrap(),
        "--modes",
        &modes.join(","),
        "--samples",
        &p["samples"].to_string(),
        "--seed",
        &p["seed"].to_string(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(rerun.status.success());
    assert_eq!(fs::read(&out).unwrap(), first);
}

#[test]
fn wstate_report_on_stdout() {
    let output = run(&["wstate", "--uniform", "3"]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert!((report["g_max"].as_f64().unwrap() - 4.0 / 9.0).abs() < 1e-12);
    assert_eq!(report["branch"], "F1Root");
}

#[test]
fn wstate_coeffs_and_blocks() {
    let output = run(&["wstate", "--coeffs", "0.6,0.8"]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    // dominant λ² ≥ 1/2: g_max = 0.64
    assert!((report["g_max"].as_f64().unwrap() - 0.64).abs() < 1e-15);

    let output = run(&["wstate", "--coeffs", "1,1,1,1", "--blocks", "0,1;2,3"]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert!((report["e_g"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn gme_deterministic_per_seed() {
    let dir = tmpdir("gme");
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    for out in [&a, &b] {
        let status = run(&[
            "gme",
            "--modes",
            "4",
            "--photons",
            "2",
            "--samples",
            "3",
            "--seed",
            "7",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(status.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let body = fs::read_to_string(&a).unwrap();
    assert!(body.starts_with("sample,gme,g_max,argmin_mask\n"));
    assert_eq!(body.lines().count(), 4);
}

#[test]
fn analytic_matches_walk_command() {
    let dir = tmpdir("analytic");
    let out = dir.join("phi1.csv");
    assert!(run(&[
        "analytic",
        "--quantity",
        "phi1",
        "--n-max",
        "20",
        "--out",
        out.to_str().unwrap(),
    ])
    .status
    .success());
    let body = fs::read_to_string(&out).unwrap();
    let series = qwalk::analytic::CoinSeries::new(20);
    for (i, line) in body.lines().skip(1).enumerate() {
        let (_, value) = line.split_once(',').unwrap();
        assert_eq!(
            value.parse::<f64>().unwrap(),
            series.phi1(i + 1, 0.0, 0.0).unwrap()
        );
    }
}

#[test]
fn unknown_flag_is_usage_error() {
    let output = run(&["walk", "--bogus", "1"]);
    assert_eq!(output.status.code(), Some(2));
    let output = run(&["not-a-command"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn argument_and_numeric_exit_codes() {
    // circle topology without --positions: argument error
    let dir = tmpdir("codes");
    let out = dir.join("x.csv");
    let output = run(&["walk", "--steps", "5", "--out", out.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));

    // zero vector: numerical failure
    let output = run(&["wstate", "--coeffs", "0,0,0"]);
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn sweep_grid_shape() {
    let dir = tmpdir("sweep");
    let out = dir.join("grid.csv");
    assert!(run(&[
        "sweep-ic",
        "--positions",
        "5",
        "--step",
        "4",
        "--theta-points",
        "7",
        "--phi-points",
        "5",
        "--out",
        out.to_str().unwrap(),
    ])
    .status
    .success());
    let body = fs::read_to_string(&out).unwrap();
    assert!(body.starts_with("theta,phi,e_g\n"));
    assert_eq!(body.lines().count(), 1 + 7 * 5);
}
