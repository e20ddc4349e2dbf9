use std::path::Path;
use std::process::{Command, Output};

fn heatbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heatbound")).args(args).output().expect("binary runs")
}

fn run(config: &str, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", "--config", config, "--out-dir", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    heatbound(&args)
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("scenario.json");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn csv_body(path: &Path) -> String {
    let text = std::fs::read_to_string(path).unwrap();
    let (header, body) = text.split_once('\n').unwrap();
    assert!(header.starts_with("# heatbound"), "{header}");
    body.to_string()
}

#[test]
fn list_shows_shapes_and_scenarios_in_stable_order() {
    let first = heatbound(&["list"]);
    assert!(first.status.success());
    let text = String::from_utf8(first.stdout).unwrap();
    assert!(text.contains("horseshoe"));
    assert!(text.contains("sharpness-m2"));
    assert!(text.contains("convex-identity"));
    assert_eq!(heatbound(&["list"]).stdout, text.as_bytes());
}

#[test]
fn convex_identity_passes_with_identical_bodies() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let first = run("convex-identity", &a, &["--threads", "3"]);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let second = run("convex-identity", &b, &["--threads", "1"]);
    assert_eq!(second.status.code(), Some(0));
    let body = csv_body(&a.join("metrics.csv"));
    assert_eq!(body, csv_body(&b.join("metrics.csv")));
    assert!(body.starts_with("domain,m,beta,x1,x2,y1,y2,d0,dg_lower,dg_upper,dmb_lower,sandwich_factor,pass\n"));
    assert_eq!(body.lines().count(), 1 + 20 * 3);
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(a.join("summary.json")).unwrap()).unwrap();
    assert!(summary["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn horseshoe_sandwich_rows_all_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = run("horseshoe-sandwich", dir.path(), &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let body = csv_body(&dir.path().join("metrics.csv"));
    let rows: Vec<&str> = body.lines().skip(1).collect();
    assert_eq!(rows.len(), 150);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}

#[test]
fn sharpness_m2_reports_the_fit() {
    let dir = tempfile::tempdir().unwrap();
    let out = run("sharpness-m2", dir.path(), &[]);
    assert_eq!(out.status.code(), Some(0));
    let reports: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("bounds.json")).unwrap()).unwrap();
    let r = &reports[0];
    for key in ["bound", "fitted_c2", "fitted_c1", "k", "samples", "max_ratio", "window"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert_eq!(r["bound"], "sharp");
    let c2 = r["fitted_c2"].as_f64().unwrap();
    assert!((c2 - 0.236235196855).abs() < 0.05 * 0.236235196855);
}

#[test]
fn spectrum_snapshot_and_diagonal_are_written() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run("interval-spectrum", dir.path(), &[]).status.code(), Some(0));
    let snap: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("spectrum.json")).unwrap()).unwrap();
    assert_eq!(snap["N"], 1);
    assert_eq!(snap["m"], 1);
    assert_eq!(snap["node_count"], 199);
    assert!((snap["eigenvalues"][0].as_f64().unwrap() - 1.0).abs() < 1e-4);
    let body = csv_body(&dir.path().join("diagonal.csv"));
    assert!(body.starts_with("t,sup_diagonal,scaled,lambda_min_t\n"));
}

#[test]
fn schema_violations_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let disc = r#""domain": {"shape": "disc", "params": {"radius": 1.0}}, "cells": 20"#;
    let cases = [
        format!(r#"{{"name": "x", {disc}, "betas": [1.0], "pairs": {{"count": 4}}}}"#),
        format!(r#"{{"name": "x", {disc}, "times": [1.0], "flavour": 1}}"#),
        r#"{"name": "x", "domain": {"shape": "torus", "params": {}}, "cells": 20, "times": [1.0]}"#.to_string(),
        format!(r#"{{"name": "x", {disc}, "times": [-1.0]}}"#),
        format!(r#"{{"name": "x", {disc}}}"#),
        "not json".to_string(),
    ];
    for body in cases {
        let config = write_config(dir.path(), &body);
        let out = run(&config, &dir.path().join("out"), &[]);
        assert_eq!(out.status.code(), Some(2), "{body}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(run("no-such-scenario", &dir.path().join("out"), &[]).status.code(), Some(2));
}

#[test]
fn oversized_spectrum_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"name": "big", "domain": {"shape": "disc", "params": {"radius": 1.0}}, "cells": 100, "times": [1.0]}"#,
    );
    let out = run(&config, &dir.path().join("out"), &[]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn failed_check_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"name": "tight", "domain": {"shape": "annulus", "params": {"r_in": 1.0, "r_out": 2.0}}, "cells": 24,
            "seed": 3, "pairs": {"count": 5}, "times": [0.5, 1.0],
            "bounds": [{"bound": "euclidean", "c2": 0.2, "c1": 1e-6}]}"#,
    );
    let out = run(&config, &dir.path().join("out"), &[]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8(out.stdout).unwrap().contains("FAIL euclidean bound"));
    let ratios = csv_body(&dir.path().join("out").join("ratios.csv"));
    assert!(ratios.starts_with("bound,t,d,value,ratio\n"));
}
