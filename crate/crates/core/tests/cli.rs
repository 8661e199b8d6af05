use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dwssp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dwssp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_reports() {
    let v = json(&dwssp(&["analyze", "dw-family:8"]));
    assert_eq!(v["order"], 2);
    assert!((v["psi_at_infinity"].as_f64().unwrap() - 0.0588).abs() < 1e-4);
    assert_eq!(v["a_stable_sample"], true);

    let v = json(&dwssp(&["analyze", "forward-euler"]));
    assert_eq!(v["order"], 1);
    assert_eq!(
        v["stability_function"]["numerator"],
        serde_json::json!([1.0, 1.0])
    );
    assert_eq!(v["explicit"], true);

    let out = dwssp(&["analyze", "dw-family:2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certify_reports() {
    for (name, expect) in [("dw-family:8", 8.0), ("ssprk22", 1.0), ("trapezoidal", 2.0)] {
        let v = json(&dwssp(&["certify", name]));
        let c = v["Ctilde"].as_f64().unwrap();
        assert!((c - expect).abs() < 1e-6, "{name}: {c}");
        assert_eq!(v["feasible"], true);
    }
    let v = json(&dwssp(&["certify", "dw-family:8"]));
    assert!(v["family_check"].as_f64().unwrap() < 1e-6);
    let v = json(&dwssp(&["certify", "backward-euler"]));
    assert!(v["Ctilde"].is_null());
}

#[test]
fn optimal_multistep() {
    let v = json(&dwssp(&["optimal-lmm", "--k", "3", "--p", "2"]));
    assert!((v["Ctilde"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    let out = dwssp(&["optimal-lmm", "--k", "1", "--p", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

fn read_dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn advect_writes_deterministic_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for (dir, jobs) in [(&a, "1"), (&b, "3")] {
        let out = dwssp(&[
            "advect",
            "--cfl",
            "8",
            "--n",
            "128",
            "--out",
            dir.to_str().unwrap(),
            "--jobs",
            jobs,
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let files = read_dir_bytes(&a);
    let names: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
    for expected in [
        "spec.json",
        "reference.csv",
        "solution_backward-euler.csv",
        "solution_trapezoidal.csv",
        "solution_dw-family-8.csv",
        "trace_dw-family-8.csv",
        "solutions.gp",
        "traces.gp",
    ] {
        assert!(names.contains(&expected), "missing {expected} in {names:?}");
    }
    assert_eq!(files, read_dir_bytes(&b));

    let trace = String::from_utf8(
        files
            .iter()
            .find(|(n, _)| n == "trace_dw-family-8.csv")
            .unwrap()
            .1
            .clone(),
    )
    .unwrap();
    assert!(trace.starts_with("step,t,tv,maxnorm,newton_iters,residual\n"));
    let script = String::from_utf8(
        files
            .iter()
            .find(|(n, _)| n == "solutions.gp")
            .unwrap()
            .1
            .clone(),
    )
    .unwrap();
    assert!(script.contains("'solution_dw-family-8.csv'"));
}

#[test]
fn converge_writes_table() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("conv");
    let out = dwssp(&[
        "converge",
        "--cfl",
        "8",
        "--sizes",
        "32,64",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table = fs::read_to_string(dir.join("table.csv")).unwrap();
    let mut lines = table.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,backward-euler_error,backward-euler_order,trapezoidal_error,trapezoidal_order,dw-family:8_error,dw-family:8_order"
    );
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "32");
    assert_eq!(first[2], "");
    let second: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert!(second[6].parse::<f64>().unwrap() > 1.0);
}

#[test]
fn burgers_small_grid() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("burgers");
    let out = dwssp(&[
        "burgers",
        "--cfl",
        "6.5",
        "--n",
        "128",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.join("reference.csv").is_file());
    assert!(dir.join("solution_dw-family-8_cfl3.25.csv").is_file());
}

#[test]
fn invalid_flags_do_no_work() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("never");
    let d = dir.to_str().unwrap();
    let cases: [&[&str]; 7] = [
        &["converge", "--sizes", "64,32", "--out", d],
        &["advect", "--cfl=-1", "--out", d],
        &["advect", "--n", "1", "--out", d],
        &["advect", "--r", "3", "--out", d],
        &["burgers", "--n", "32", "--out", d],
        &["burgers", "--t-end", "0.5", "--out", d],
        &["advect", "--jobs", "0", "--out", d],
    ];
    for args in cases {
        let out = dwssp(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!dir.exists(), "{args:?} created the output directory");
    }
}

#[test]
fn unwritable_output_is_an_io_error() {
    let tmp = tempfile::tempdir().unwrap();
    let file = tmp.path().join("occupied");
    fs::write(&file, "x").unwrap();
    let out = dwssp(&["advect", "--n", "16", "--out", file.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(4),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
