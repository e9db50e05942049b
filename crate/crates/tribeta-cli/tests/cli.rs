use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tribeta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).collect()
}

#[test]
fn negative_beta_is_a_usage_error_naming_the_key() {
    let out = run(&["local-law", "--beta", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("beta"), "stderr: {}", stderr(&out));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = run(&["sample", "--frobnicate", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sample_emits_three_column_csv_with_header() {
    let out = run(&["sample", "--n", "5", "--beta", "2", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("# seed = 3"));
    assert!(text.contains("# tool_version = "));
    assert!(text.contains("# status = ok"));
    let lines = data_lines(&text);
    assert_eq!(lines[0], "index,diag,offdiag");
    assert_eq!(lines.len(), 6, "columns + 5 rows: {text}");
    assert_eq!(lines[1].split(',').count(), 3);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"n": 200, "beta": 4.0}"#).unwrap();
    let out = run(&["sample", "--config", cfg.to_str().unwrap(), "--n", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("# n = 7"), "flag wins: {text}");
    assert!(text.contains("# beta = 4"), "file fills the gap: {text}");
}

#[test]
fn unknown_config_key_is_rejected_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"frobnicate": 1}"#).unwrap();
    let out = run(&["sample", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("frobnicate"), "stderr: {}", stderr(&out));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let f1 = dir.path().join("a.csv");
    let f2 = dir.path().join("b.csv");
    let args = |p: &std::path::Path| {
        vec![
            "local-law".to_string(),
            "--n".into(),
            "40".into(),
            "--beta".into(),
            "1".into(),
            "--trials".into(),
            "100".into(),
            "--seed".into(),
            "7".into(),
            "--c".into(),
            "10".into(),
            "--floor".into(),
            "full".into(),
            "--out".into(),
            p.to_str().unwrap().to_string(),
        ]
    };
    let o1 = Command::new(env!("CARGO_BIN_EXE_tribeta")).args(args(&f1)).output().unwrap();
    let o2 = Command::new(env!("CARGO_BIN_EXE_tribeta")).args(args(&f2)).output().unwrap();
    assert_eq!(o1.status.code(), Some(0));
    assert_eq!(o2.status.code(), Some(0));
    let b1 = fs::read(&f1).unwrap();
    let b2 = fs::read(&f2).unwrap();
    assert!(!b1.is_empty());
    assert_eq!(b1, b2);
}

#[test]
fn local_law_emits_one_row_per_trial_with_valid_flag() {
    let out = run(&[
        "local-law", "--n", "40", "--beta", "1", "--trials", "100", "--seed", "7", "--c", "10",
        "--floor", "full",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines = data_lines(&text);
    assert_eq!(lines[0], "n,trial,sup_error,valid");
    assert_eq!(lines.len(), 101, "columns + 100 trials");
    assert!(lines[1].ends_with(",true"));
    assert!(text.contains("\"exceed_count\":0"));
}

#[test]
fn special_eval_emits_four_columns() {
    let out = run(&["special", "eval", "--fn", "hermite", "--k", "6", "--grid-re", "-2,2,9"]);
    assert_eq!(out.status.code(), Some(0));
    let lines_owned = stdout(&out);
    let lines = data_lines(&lines_owned);
    assert_eq!(lines[0], "index,x,k,value");
    assert_eq!(lines.len(), 10, "columns + 9 rows");
    for row in &lines[1..] {
        assert_eq!(row.split(',').count(), 4, "row: {row}");
    }
}

#[test]
fn counting_rejects_unresolvable_interval() {
    let out = run(&["counting", "--n", "100", "--eta", "0.2", "--a", "0.1", "--b", "0.4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("interval"), "stderr: {}", stderr(&out));
}

#[test]
fn json_format_is_a_parseable_document() {
    let out = run(&["partial-sum", "--n", "120", "--k", "60", "--l", "24", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["command"], "partial-sum");
    assert_eq!(doc["status"], "ok");
    assert!(doc["summary"]["normalized_max"].as_f64().unwrap() > 0.0);
    assert_eq!(doc["config"]["n"], "120");
}

#[test]
fn threshold_violation_exits_one_but_still_writes() {
    // two nearby sizes give a flat fitted slope, outside the decay window
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("study.csv");
    let out = run(&["zero-temp-study", "--ns", "100,200", "--out", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = fs::read_to_string(&f).unwrap();
    assert!(text.contains("# status = ok"));
    assert!(text.contains("\"threshold_ok\":false"));
    let lines = data_lines(&text);
    assert_eq!(lines.len(), 3, "columns + 2 rows");
}
