//! End-to-end tests of the `cheb` binary: argument handling, output
//! shape, exit codes (0 success, 1 verification failures, 2 usage or
//! evaluation errors), and file formats.

use std::path::Path;
use std::process::{Command, Output};

fn cheb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cheb"))
        .args(args)
        .output()
        .expect("spawn cheb")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn eval_computes_functional() {
    let out = cheb(&["eval", "x", "x", "0", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("0.0833333333"), "{text}");
    assert!(text.contains("evals"), "{text}");
}

#[test]
fn eval_with_subintervals_reports_difference() {
    let out = cheb(&["eval", "x", "x", "0", "1", "--u", "0.2", "--v", "0.7"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let line = text
        .lines()
        .find(|l| l.starts_with("|difference|"))
        .unwrap_or_else(|| panic!("no difference line in {text}"));
    let value: f64 = line
        .split('=')
        .nth(1)
        .and_then(|rest| rest.split('±').next())
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or_else(|| panic!("unparseable difference line {line}"));
    // |(0.7)² − (0.8)²|/12 = 0.0125
    assert!((value - 0.0125).abs() < 1e-12, "{line}");
}

#[test]
fn eval_rejects_degenerate_interval() {
    let out = cheb(&["eval", "x", "x", "1", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("degenerate"), "{}", stderr(&out));
}

#[test]
fn eval_rejects_lone_subinterval_flag() {
    let out = cheb(&["eval", "x", "x", "0", "1", "--u", "0.2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_negative_endpoints_parse() {
    let out = cheb(&["eval", "x", "x", "-1", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    // (b−a)²/12 = 4/12
    assert!(stdout(&out).contains("0.3333333333"), "{}", stdout(&out));
}

#[test]
fn eval_budget_exhaustion_is_exit_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_cheb"))
        .args(["eval", "sin(20*x)", "exp(x)", "0", "3"])
        .env("CHEB_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("CHEB_BUDGET"), "{}", stderr(&out));
}

#[test]
fn bound_evaluates_closed_forms() {
    let out = cheb(&[
        "bound",
        "thm4.5.7/Linf",
        "--a", "0", "--b", "1", "--u", "0.25", "--v", "0.75",
        "--L", "1", "--ginf", "1",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("0.09375"), "{text}"); // 3/32
    assert!(text.contains("preconditions"), "{text}");
}

#[test]
fn bound_defaults_to_midpoint_configuration() {
    let out = cheb(&["bound", "thm4.5.7/Linf", "--a", "0", "--b", "1", "--L", "1", "--ginf", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("0.041666666"), "{}", stdout(&out)); // 1/24
}

#[test]
fn bound_rejects_bad_holder_order() {
    let out = cheb(&[
        "bound", "thm4.5.9",
        "--a", "0", "--b", "1",
        "--L", "1", "--H", "1", "--p", "1.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("(0, 1]"), "{}", stderr(&out));
}

#[test]
fn bound_redirects_functional_valued_ids() {
    let out = cheb(&["bound", "eq2.1", "--a", "0", "--b", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let text = stderr(&out);
    assert!(text.contains("eval") || text.contains("verify"), "{text}");
}

#[test]
fn bound_accepts_negative_constants_flags() {
    let out = cheb(&[
        "bound", "thm1/gruss",
        "--a", "0", "--b", "1",
        "--m1", "-1", "--M1", "1", "--m2", "-2", "--M2", "2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("2"), "{}", stdout(&out)); // ¼·2·4
}

#[test]
fn verify_writes_deterministic_jsonl_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("run1.jsonl");
    let p2 = dir.path().join("run2.jsonl");
    for p in [&p1, &p2] {
        let out = cheb(&[
            "verify",
            "--entries", "6",
            "--cfgs", "3",
            "--out", p.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        let text = stdout(&out);
        assert!(text.contains("0 certified violations"), "{text}");
        assert!(text.contains("theorem"), "missing report header: {text}");
    }
    let b1 = std::fs::read(&p1).unwrap();
    let b2 = std::fs::read(&p2).unwrap();
    assert!(!b1.is_empty());
    assert_eq!(b1, b2, "same-seed verify runs differ");
}

#[test]
fn verify_scaled_rhs_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("scaled.jsonl");
    let out = cheb(&[
        "verify",
        "--entries", "6",
        "--cfgs", "3",
        "--scale-rhs", "0.01",
        "--out", p.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("violations"), "{}", stdout(&out));
}

#[test]
fn verify_csv_format_has_header() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("records.csv");
    let out = cheb(&[
        "verify",
        "--entries", "4",
        "--cfgs", "2",
        "--format", "csv",
        "--out", p.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&p).unwrap();
    let first = text.lines().next().unwrap();
    assert_eq!(
        first,
        "theorem,case,entry,family,mode,seed,a,u,v,b,lhs,lhs_err,rhs,pass,tightness,hypothesis_ok"
    );
}

#[test]
fn verify_config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let p = dir.path().join("out.jsonl");
    std::fs::write(&cfg, r#"{"seed": 7, "entries": 5, "cfgs_per_entry": 2}"#).unwrap();
    let out = cheb(&[
        "verify",
        "--config", cfg.to_str().unwrap(),
        "--entries", "3",
        "--theorems", "thm1",
        "--out", p.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let body = std::fs::read_to_string(&p).unwrap();
    for line in body.lines() {
        assert!(line.contains("\"seed\":7"), "config seed not applied: {line}");
        assert!(line.contains("\"theorem\":\"thm1\""), "filter not applied: {line}");
    }
}

#[test]
fn report_summarizes_and_propagates_violations() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.jsonl");
    let bad = dir.path().join("bad.jsonl");
    let ok = cheb(&["verify", "--entries", "4", "--cfgs", "2", "--out", good.to_str().unwrap()]);
    assert!(ok.status.success());
    let fail = cheb(&[
        "verify", "--entries", "4", "--cfgs", "2",
        "--scale-rhs", "0.01",
        "--out", bad.to_str().unwrap(),
    ]);
    assert_eq!(fail.status.code(), Some(1));

    let out = cheb(&["report", "--records", good.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("theorem"), "{}", stdout(&out));

    let out = cheb(&["report", "--records", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let missing = dir.path().join("nope.jsonl");
    assert!(!Path::new(&missing).exists());
    let out = cheb(&["report", "--records", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_rejects_unknown_family() {
    let out = cheb(&["verify", "--entries", "2", "--cfgs", "1", "--families", "quartic"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn nested_mode_is_accepted_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("nested.jsonl");
    let out = cheb(&[
        "verify",
        "--entries", "4",
        "--cfgs", "2",
        "--nested",
        "--out", p.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let body = std::fs::read_to_string(&p).unwrap();
    assert!(body.lines().all(|l| l.contains("\"mode\":\"nested\"")));
}
