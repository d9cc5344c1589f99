use std::process::{Command, Output};

use serde_json::Value;

fn cocycles(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cocycles"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = cocycles(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stderr));
    });
    (out.status.code().unwrap(), v)
}

fn without_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn solve_cocycles_reports_dimension_two() {
    let (code, v) = report(&["--command", "solve-cocycles", "--n", "3", "--mode", "equivariant", "--max-degree", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["result"]["dimension"], 2);
    assert_eq!(v["job"]["command"], "solve-cocycles");
}

#[test]
fn n1_cocycles_reports_dimension_three() {
    let (code, v) = report(&["--command", "n1-cocycles", "--max-degree", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["dimension"], 3);
    assert_eq!(v["job"]["mode"], "full");
}

#[test]
fn verify_div_passes() {
    let (code, v) = report(&["--command", "verify-div", "--n", "3", "--max-degree", "4", "--seed", "7"]);
    assert_eq!(code, 0);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    assert_eq!(v["result"]["pairs"], 200);
}

#[test]
fn es_trace_passes() {
    let (code, v) = report(&["--command", "es-trace", "--n", "2", "--samples", "20"]);
    assert_eq!(code, 0, "{v}");
}

#[test]
fn reports_are_reproducible() {
    let args = ["--command", "verify-div", "--n", "2", "--max-degree", "3", "--seed", "11", "--samples", "40"];
    let (_, a) = report(&args);
    let (_, b) = report(&args);
    assert_eq!(without_timings(a.clone()), without_timings(b));
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let (_, c) = report(&seq);
    assert_eq!(without_timings(a)["checks"], without_timings(c)["checks"]);
}

#[test]
fn config_file_with_flag_override_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.toml");
    std::fs::write(&cfg, "command = \"solve-cocycles\"\nn = 3\ntarget = \"cyclic\"\nmax-degree = 2\n").unwrap();
    let out = dir.path().join("report.json");
    let o = cocycles(&[
        "--config",
        cfg.to_str().unwrap(),
        "--max-degree",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["job"]["max_degree"], 3);
    assert_eq!(v["job"]["target"], "cyclic");
    assert_eq!(v["result"]["dimension"], 0);
}

#[test]
fn config_errors_exit_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "command = \"verify-div\"\nn = \"three\"\n").unwrap();
    let o = cocycles(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");

    assert_eq!(cocycles(&["--command", "no-such-command"]).status.code(), Some(2));
    assert_eq!(cocycles(&[]).status.code(), Some(2));
    assert_eq!(cocycles(&["--command", "es-trace", "--n", "1"]).status.code(), Some(2));
    assert_eq!(cocycles(&["--command", "verify-msz", "--n", "2", "--max-degree", "3"]).status.code(), Some(2));
}

#[test]
fn text_format() {
    let o = cocycles(&["--command", "verify-msz", "--n", "2", "--max-degree", "2", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("status  PASS"), "{text}");
    assert!(text.contains("[PASS] direct_sum"), "{text}");
}
