use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn sample(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../samples").join(name).to_str().unwrap().to_string()
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("polychain-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polychain")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn cycle_echoes_its_configuration() {
    let out = run(&["cycle", "--measure", &sample("fig1.json"), "--sizes", "4", "--offset-seed", "103"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["config"]["command"], "cycle");
    assert_eq!(v["config"]["offset_seed"], 103);
    assert_eq!(v["report"]["boundary_check"], true);
    assert!(v["report"]["tv_error"].as_f64().unwrap() <= v["report"]["c_constant"].as_f64().unwrap() / 4.0);
}

#[test]
fn malformed_json_exits_2_without_output() {
    let bad = scratch("bad.json", "{\"n\": 2, \"d\": 1, \"atoms\": [");
    for args in [
        vec!["cycle", "--measure", bad.as_str()],
        vec!["converge", "--measure", bad.as_str(), "--sizes", "4,8"],
        vec!["energy", "--chain", bad.as_str()],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?} wrote {}", String::from_utf8_lossy(&out.stdout));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn missing_file_and_bad_sizes_exit_2() {
    let out = run(&["cycle", "--measure", "/nonexistent/measure.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("IoError"));
    let out = run(&["cycle", "--measure", &sample("fig1.json"), "--sizes", "four"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn filling_needs_the_unit_class() {
    let out = run(&["fill", "--measure", &sample("fig1.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(stderr(&out).contains("NonMatchingClass"), "{}", stderr(&out));
}

#[test]
fn multigraph_output_feeds_extract_and_energy() {
    let out = run(&["multigraph", "--measure", &sample("cross.json"), "--sizes", "9x3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["report"]["positivity"], true);
    let report = scratch("mg.json", &String::from_utf8(out.stdout).unwrap());

    let ex = run(&["extract", "--chain", &report]);
    assert_eq!(ex.status.code(), Some(0), "{}", stderr(&ex));
    assert_eq!(json(&ex)["q"], 20);

    let en = run(&["energy", "--chain", &report, "--psi", &sample("sin.json")]);
    assert_eq!(en.status.code(), Some(0), "{}", stderr(&en));
    let v = json(&en);
    let (e, g) = (v["energy"].as_f64().unwrap(), v["graph_energy"].as_f64().unwrap());
    assert!((e - g).abs() < 1e-9 && e < 1.0, "{e} {g}");
}

#[test]
fn export_formats() {
    let out = run(&["cycle", "--measure", &sample("fig1.json"), "--format", "svg"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("<svg"));
    let chain = scratch("cycle.json", &String::from_utf8(run(&["cycle", "--measure", &sample("fig1.json")]).stdout).unwrap());
    let obj = run(&["export", "--chain", &chain, "--format", "obj"]);
    assert_eq!(obj.status.code(), Some(2), "OBJ needs three dimensions");
}

#[test]
fn lp_report_has_certificates() {
    let out = run(&["lp", "--psi", &sample("sin.json"), "--candidates", &sample("candidates.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = &json(&out)["report"];
    assert!((r["value"].as_f64().unwrap() - 0.6 * 2f64.sqrt()).abs() < 1e-9);
    assert!(r["residuals"]["slackness"].as_f64().unwrap() <= 1e-9);
    assert!(r["witness"].is_array());
}

#[test]
fn counterexample_exit_codes() {
    let ok = run(&["counterexample", "--psi", &sample("sin.json"), "--candidates", &sample("candidates.json")]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    assert!(json(&ok)["margin"].as_f64().unwrap() >= 0.05);

    let starved = run(&["counterexample", "--psi", &sample("sin.json"), "--candidates", &sample("candidates.json"), "--budget", "10"]);
    assert_eq!(starved.status.code(), Some(3));
    assert!(stderr(&starved).contains("GapTooSmall"));

    let area = scratch("area.json", r#"{"kind": "expression", "expr": "1", "even": true}"#);
    let none = run(&["counterexample", "--psi", &area, "--candidates", &sample("candidates.json")]);
    assert_eq!(none.status.code(), Some(2));
    assert!(none.stdout.is_empty());
}

#[test]
fn approx_respects_eps() {
    let out = run(&["approx", "--measure", &sample("irrational.json"), "--eps", "0.01"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert!(v["wasserstein"].as_f64().unwrap() < 0.01);
    assert!((v["mass_out"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let target = std::env::temp_dir().join(format!("polychain-cli-{}-out.json", std::process::id()));
    let args = ["lp", "--psi", &sample("sin.json"), "--candidates", &sample("candidates.json")];
    let direct = run(&args);
    let mut with_out: Vec<&str> = args.to_vec();
    let t = target.to_str().unwrap();
    with_out.extend(["--out", t]);
    let out = run(&with_out);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&target).unwrap();
    let _ = std::fs::remove_file(&target);
    // the echoed configuration differs only in the output path
    let (mut a, mut b): (Value, Value) = (serde_json::from_slice(&direct.stdout).unwrap(), serde_json::from_slice(&written).unwrap());
    a["config"]["out"] = Value::Null;
    b["config"]["out"] = Value::Null;
    assert_eq!(a, b);
}

#[test]
fn converge_rows_and_flags() {
    let out = run(&["converge", "--measure", &sample("fig1.json"), "--sizes", "4,8,16"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("N,M,tv_error"));
    for row in &rows[1..] {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 12);
        assert_eq!(cols[9], "true");
        assert_eq!(cols[10], "true");
    }
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["multigraph", "--measure", &sample("cross.json"), "--sizes", "16x4", "--quad-order", "4"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
