// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

use aoidoi::rows::HEADER;

fn aoidoi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aoidoi")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const BASE: &str =
    "lambda = 0.5\nmu = 0.25\nevent_kind = \"exponential\"\nservice_kind = \"deterministic\"\n";

#[test]
fn bound_writes_csv_with_exact_header() {
    let dir = tempfile::tempdir().unwrap();
    let cfg =
        write(dir.path(), "dd1.toml", &format!("{BASE}policy = \"time\"\nw = [5, 6, 8]\nepsilon = 1e-6\n"));
    let out = aoidoi(&["bound", "--config", &cfg]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(HEADER));
    // 3 w values x (delay, aoi, doi, doi_int)
    assert_eq!(lines.count(), 12);
    assert!(text.lines().any(|l| l.starts_with("dd1,tt,w,5.0,0.8,delay,bound,1e-6,4.0")));
}

#[test]
fn out_flag_and_empty_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", &format!("{BASE}epsilon = 1e-6\ngrid = []\n"));
    let csv = dir.path().join("out.csv");
    let summary = dir.path().join("summary.json");
    let out = aoidoi(&[
        "sweep",
        "--config",
        &cfg,
        "--out",
        csv.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(csv).unwrap(), format!("{HEADER}\n"));
    assert_eq!(std::fs::read_to_string(summary).unwrap().trim(), "{}");
}

#[test]
fn infeasible_rows_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", &format!("{BASE}epsilon = 1e-6\ngrid = [1.0]\n"));
    let out = aoidoi(&["sweep", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().skip(1).filter(|l| l.ends_with(",,,infeasible")).count(), 8);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_key = write(dir.path(), "a.toml", &format!("{BASE}epsilon = 1e-6\ncolour = 1\n"));
    let vacuous = write(dir.path(), "b.toml", &format!("{BASE}policy = \"time\"\nw = 5\nepsilon = 2\n"));
    assert_eq!(aoidoi(&["bound", "--config", &bad_key]).status.code(), Some(2));
    assert_eq!(aoidoi(&["bound", "--config", &vacuous]).status.code(), Some(2));
    assert_eq!(aoidoi(&["bound", "--config", "/nonexistent.toml"]).status.code(), Some(2));
    assert_eq!(aoidoi(&["bound"]).status.code(), Some(2));
    assert_eq!(aoidoi(&["figure", "fig9"]).status.code(), Some(2));
    assert_eq!(aoidoi(&["frobnicate"]).status.code(), Some(2));
    let ok = aoidoi(&["bound", "--config", &vacuous, "--allow-vacuous"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8(ok.stdout).unwrap().contains("vacuous"));
}

#[test]
fn simulate_is_repeatable_and_flags_rounding() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "sim.toml",
        "lambda = 0.5\nmu = 1\nevent_kind = \"exponential\"\nservice_kind = \"exponential\"\n\
         policy = \"event\"\nalpha = 1.2\nepsilon = [0.1, 1e-6]\nsamples = 200000\nburn_in = 100\n",
    );
    let a = aoidoi(&["simulate", "--config", &cfg, "--seed", "5"]);
    let b = aoidoi(&["simulate", "--config", &cfg, "--seed", "5"]);
    let c = aoidoi(&["simulate", "--config", &cfg, "--seed", "6"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 2);
    assert!(text.lines().skip(1).all(|l| l.contains("alpha_rounded=1") && l.contains("sigma3=")));
    assert!(text.lines().filter(|l| l.contains(",1e-6,")).all(|l| l.contains("insufficient_samples")));
}
