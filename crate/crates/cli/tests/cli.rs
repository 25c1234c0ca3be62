use std::path::Path;
use std::process::{Command, Output};

fn parisian(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parisian"))
        .current_dir(dir)
        .env_remove("PARISIAN_REGISTRY")
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn piterbarg_sweep_writes_nine_rows_and_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["piterbarg", "--a", "1", "--b", "1", "--sweep-L", "0:2:0.25", "--n", "300", "--tau", "0.02", "--out", "out/sweep.csv"];
    let o = parisian(dir.path(), &args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("out/sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "L,a,b,estimate,std_error,lower,upper,M,tau,n,seed");
    assert_eq!(lines.len(), 10);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/run_manifest.json")).unwrap()).unwrap();
    let run = &manifest["runs"][0];
    assert_eq!(run["command"], "piterbarg");
    assert_eq!(run["outputs"][0], "out/sweep.csv");

    // same flags and seed, same bytes
    let again = ["piterbarg", "--a", "1", "--b", "1", "--sweep-L", "0:2:0.25", "--n", "300", "--tau", "0.02", "--out", "again.csv"];
    assert_eq!(code(&parisian(dir.path(), &again)), 0);
    assert_eq!(csv, std::fs::read_to_string(dir.path().join("again.csv")).unwrap());
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&parisian(dir.path(), &["piterbarg", "--a", "1"])), 2);
    assert_eq!(code(&parisian(dir.path(), &["pickands", "--H", "0.5", "--no-such-flag"])), 2);
    assert_eq!(code(&parisian(dir.path(), &["pickands", "--H", "0.5", "--tau", "0.01", "--tau", "0.02"])), 2);
    assert_eq!(code(&parisian(dir.path(), &["constants", "list"])), 2);
    assert_eq!(code(&parisian(dir.path(), &["validate", "--only", "11"])), 2);
}

#[test]
fn simulation_errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = parisian(dir.path(), &["piterbarg", "--a", "0", "--b", "1", "--n", "10"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("drift slopes must be positive"));
}

#[test]
fn rare_events_are_refused_unless_forced() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["mc-ruin", "--c", "1", "--q", "1", "--H", "0.5", "--u", "5", "--n", "200"];
    let o = parisian(dir.path(), &base);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--force"));
    let forced: Vec<&str> = base.iter().copied().chain(["--force", "--json"]).collect();
    let o = parisian(dir.path(), &forced);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["estimates"][0]["hits"], 0);
}

#[test]
fn asymptotics_json_reports_regime_and_formula() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["asymptotics", "--c1", "1", "--c2", "0.75", "--q1", "0.5", "--q2", "1", "--H", "0.5", "--T", "0.5", "--u", "2", "--json"];
    let o = parisian(dir.path(), &args);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["regime"], "RightOfT2");
    assert_eq!(v["formula_id"], "case1-bm");
    assert!(v["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn missing_constants_fail_under_cache_only() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--registry", "reg.txt", "asymptotics", "--c1", "2", "--c2", "1", "--q1", "1", "--q2", "2", "--H", "0.5", "--T", "1", "--u", "2"];
    let o = parisian(dir.path(), &args);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing constant"));
}

#[test]
fn saved_constants_are_listed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--registry", "reg.txt", "--save", "pickands", "--H", "0.5", "--L", "0.5", "--n", "200", "--tau", "0.05", "--M", "3"];
    assert_eq!(code(&parisian(dir.path(), &args)), 0);
    let o = parisian(dir.path(), &["--registry", "reg.txt", "constants", "list"]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8_lossy(&o.stdout);
    assert_eq!(out.lines().count(), 1);
    assert!(out.contains(" pickands 0.5 0.5 "));
}

#[test]
fn validate_writes_both_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = parisian(dir.path(), &["--out", "report", "validate", "--only", "10"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let text = std::fs::read_to_string(dir.path().join("report/validation_report.txt")).unwrap();
    assert!(text.starts_with("criterion 10: PASS"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report/validation_report.json")).unwrap()).unwrap();
    assert_eq!(json["passed"], true);
}

#[test]
fn every_command_has_help() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in ["piterbarg", "pickands", "asymptotics", "mc-ruin", "validate", "constants", "figures", "paths"] {
        assert_eq!(code(&parisian(dir.path(), &[cmd, "--help"])), 0, "{cmd}");
    }
}
