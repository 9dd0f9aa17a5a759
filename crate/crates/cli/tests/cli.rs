// Copyright 2026 The PSTLab Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::process::{Command, Output};

fn pstlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pstlab"))
        .args(args)
        .env_remove("PSTLAB_MAX_QUBITS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn overrotation_factor() {
    let out = pstlab(&["overrotation", "--tau", "0.5", "--sum-h2", "0.24"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1.019023\n");
}

#[test]
fn overrotation_defaults_to_configured_errors() {
    let out = pstlab(&["overrotation"]);
    assert_eq!(stdout(&out), "1.019023\n");
}

#[test]
fn calibrate_without_errors_is_half_angle() {
    let out = pstlab(&["calibrate", "--theta", "1.0", "--sum-h2", "0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0.5\n");
}

#[test]
fn scalar_json_output() {
    let out = pstlab(&[
        "calibrate",
        "--theta",
        "1.0",
        "--sum-h2",
        "0.24",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let tau = v["tau"].as_f64().unwrap();
    assert!(tau < 0.5 && tau > 0.45);
    assert_eq!(v["theta"].as_f64(), Some(1.0));
}

#[test]
fn table1_defaults() {
    let out = pstlab(&["table1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let zx = v["pst"]["ZX"].as_f64().unwrap();
    assert!((zx - 1.0207).abs() <= 1e-3, "{zx}");
    assert!((v["no_pst"]["YY"].as_f64().unwrap() - 0.6).abs() < 1e-9);
    assert_eq!(v["config"]["drive"]["label"], "ZX");
}

#[test]
fn table1_csv() {
    let out = pstlab(&["table1", "--format", "csv"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("label,no_pst,pst"));
    let labels: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(labels, ["XX", "YX", "YY", "ZX", "ZZ"]);
}

#[test]
fn sign_table_single_qubit() {
    let out = pstlab(&["sign-table", "--qubits", "1"]);
    assert_eq!(
        stdout(&out),
        "label,I,X,Y,Z\nI,1,1,1,1\nX,1,1,-1,-1\nY,1,-1,1,-1\nZ,1,-1,-1,1\n"
    );
    let out = pstlab(&["sign-table", "--qubits", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["labels"], serde_json::json!(["I", "X", "Y", "Z"]));
    assert_eq!(v["signs"][1], serde_json::json!([1, 1, -1, -1]));
}

#[test]
fn parity_sweep_csv_header_and_rows() {
    let out = pstlab(&["parity-sweep", "--noise", "pauli_z"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "delta,error,symmetrized,noise_kind");
    assert_eq!(lines.len(), 42);
    assert!(lines[1].starts_with("-1.0,"));
    assert!(lines.iter().skip(1).all(|l| l.ends_with(",pauli_z")));
}

#[test]
fn usage_errors_exit_one() {
    let out = pstlab(&["bogus"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("Usage"));
    let out = pstlab(&["table1", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
    let out = pstlab(&[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = pstlab(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("parity-sweep"));
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"drive": {"label": "ZXY"}}"#).unwrap();
    let out = pstlab(&["table1", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("ZXY"));

    fs::write(&path, "{ not json").unwrap();
    let out = pstlab(&["table1", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let out = pstlab(&["calibrate", "--theta", "4.0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn numerical_failure_exits_two() {
    // drive eigenphases land on ±π, so the channel logarithm is undefined
    let out = pstlab(&["table1", "--tau", "1.5707963267948966", "--delta", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("branch cut"));
}

#[test]
fn resource_bound_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_pstlab"))
        .args(["sign-table", "--qubits", "2"])
        .env("PSTLAB_MAX_QUBITS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("PSTLAB_MAX_QUBITS"));

    let out = Command::new(env!("CARGO_BIN_EXE_pstlab"))
        .args(["sign-table", "--qubits", "5"])
        .env("PSTLAB_MAX_QUBITS", "5")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 1 + 1024);
}

#[test]
fn dump_config_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let first = pstlab(&["--dump-config", "table1", "--delta", "0.3", "--tau", "0.4"]);
    assert!(first.status.success());
    let path = dir.path().join("run.json");
    fs::write(&path, &first.stdout).unwrap();
    let cfg = path.to_str().unwrap();

    let second = pstlab(&["--config", cfg, "--dump-config", "table1"]);
    assert_eq!(first.stdout, second.stdout);

    let from_flags = pstlab(&["table1", "--delta", "0.3", "--tau", "0.4"]);
    let from_file = pstlab(&["table1", "--config", cfg]);
    assert!(from_file.status.success());
    assert_eq!(from_flags.stdout, from_file.stdout);
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [&["table1"][..], &["parity-sweep"][..], &["sign-table"][..]] {
        let a = pstlab(args);
        let b = pstlab(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = pstlab(&["parity-sweep", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("delta,error,symmetrized,noise_kind\n"));
    assert!(text.contains("amplitude_damping"));
}
