use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn heinzlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heinzlab"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn matrix(rows: usize, cols: usize, entries: &[f64]) -> Value {
    serde_json::json!({"rows": rows, "cols": cols, "entries": entries})
}

#[test]
fn verify_zhan_small_campaign_passes() {
    let out = heinzlab(&[
        "verify", "--suite", "zhan", "--dims", "3", "--trials", "100", "--seed", "1",
    ]);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let check = &report["checks"][0];
    assert_eq!(check["name"], "zhan");
    assert_eq!(check["total"], 2100);
    assert_eq!(check["fail"], 0);
}

#[test]
fn verify_all_with_zero_trials_runs_nothing() {
    let out = heinzlab(&["verify", "--suite", "all", "--trials", "0"]);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["checks"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = heinzlab(&[
        "verify",
        "--suite",
        "tao",
        "--dims",
        "2,4",
        "--trials",
        "5",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    let report: Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["suite"], "tao");
    let csv = fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert!(csv.starts_with("suite,check,total,pass,fail"));
    assert!(csv.contains("tao,tao_gram,10,10,0"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        r#"{"suite": "corollary1", "dims": [2], "trials": 3, "seed": 4}"#,
    );
    let out = heinzlab(&["verify", "--config", &cfg, "--trials", "2"]);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["config"]["trials"], 2);
    assert_eq!(report["config"]["seed"], 4);
    assert_eq!(report["suite"], "corollary1");
}

#[test]
fn malformed_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    for text in [
        "{not json",
        r#"{"suite": "everything"}"#,
        r#"{"dims": [0]}"#,
        r#"{"unknown": 1}"#,
    ] {
        let cfg = write(dir.path(), "bad.json", text);
        assert_eq!(code(&heinzlab(&["verify", "--config", &cfg])), 2, "{text}");
    }
    assert_eq!(code(&heinzlab(&["verify", "--config", "/nonexistent/cfg.json"])), 2);
}

#[test]
fn counterexample_reports_threshold_in_window() {
    let out = heinzlab(&["counterexample"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("nu,sigma_j_heinz,sigma_j_geom,g"));
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with("threshold"))
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 21);
    let mid = rows.iter().find(|r| r[0] == 0.5).unwrap();
    assert!(mid[3].abs() < 1e-12);
    for (x, y) in rows.iter().zip(rows.iter().rev()) {
        assert!((x[3] - y[3]).abs() < 1e-12);
    }
    let threshold: f64 = text
        .lines()
        .last()
        .unwrap()
        .strip_prefix("threshold,")
        .unwrap()
        .parse()
        .unwrap();
    assert!(threshold > 0.12 && threshold < 0.14);
}

#[test]
fn counterexample_rejects_tiny_grid() {
    assert_eq!(code(&heinzlab(&["counterexample", "--grid-points", "2"])), 2);
}

#[test]
fn eval_power_norm_and_heinz() {
    let dir = tempfile::tempdir().unwrap();
    let diag = write(
        dir.path(),
        "diag.json",
        &serde_json::json!({"A": matrix(2, 2, &[4.0, 0.0, 0.0, 9.0])}).to_string(),
    );
    let out = heinzlab(&["eval", "--input", &diag, "--op", "power", "--p", "0.5"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["hermitian"], true);
    assert_eq!(v["params"]["p"], 0.5);
    let e = v["result"]["entries"].as_array().unwrap();
    assert!((e[0][0].as_f64().unwrap() - 2.0).abs() < 1e-14);
    assert!((e[3][0].as_f64().unwrap() - 3.0).abs() < 1e-14);

    let three_four = write(
        dir.path(),
        "34.json",
        &serde_json::json!({"A": matrix(2, 2, &[3.0, 0.0, 0.0, 4.0])}).to_string(),
    );
    let out = heinzlab(&["eval", "--input", &three_four, "--op", "norm", "--norm", "schatten:1"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["result"].as_f64().unwrap() - 7.0).abs() < 1e-14);

    let pair = write(
        dir.path(),
        "pair.json",
        &serde_json::json!({
            "A": matrix(3, 3, &[2.0, 4.0, 2.0, 4.0, 8.0, 4.0, 2.0, 4.0, 4.0]),
            "B": matrix(3, 3, &[5.0, 0.0, 4.0, 0.0, 0.0, 0.0, 4.0, 0.0, 4.0]),
        })
        .to_string(),
    );
    let out = heinzlab(&["eval", "--input", &pair, "--op", "heinz", "--nu", "0.05"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"]["rows"], 3);
    assert_eq!(v["params"]["nu"], 0.05);
}

#[test]
fn eval_monotone_routes_agree() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "a.json",
        &serde_json::json!({"A": matrix(2, 2, &[2.0, 1.0, 1.0, 3.0])}).to_string(),
    );
    let f = r#"{"alpha": 0.0, "beta": 0.0, "measure": {"power_r": 0.5}}"#;
    let run = |method: &str| {
        let out = heinzlab(&[
            "eval",
            "--input",
            &input,
            "--op",
            "monotone",
            "--function",
            f,
            "--method",
            method,
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
        v["result"]["entries"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| e[0].as_f64().unwrap())
            .collect::<Vec<_>>()
    };
    for (x, y) in run("spectral").iter().zip(run("integral")) {
        assert!((x - y).abs() < 1e-6);
    }
}

#[test]
fn eval_schema_and_shape_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad_schema = write(dir.path(), "bad.json", r#"{"A": {"rows": 2, "cols": 2}}"#);
    assert_eq!(
        code(&heinzlab(&[
            "eval",
            "--input",
            &bad_schema,
            "--op",
            "power",
            "--p",
            "0.5"
        ])),
        2
    );
    let bad_count = write(
        dir.path(),
        "count.json",
        &serde_json::json!({"A": matrix(2, 2, &[1.0, 2.0, 3.0])}).to_string(),
    );
    assert_eq!(
        code(&heinzlab(&[
            "eval", "--input", &bad_count, "--op", "power", "--p", "0.5"
        ])),
        2
    );
    let mismatch = write(
        dir.path(),
        "mismatch.json",
        &serde_json::json!({"A": matrix(1, 1, &[1.0]), "B": matrix(2, 2, &[1.0, 0.0, 0.0, 1.0])}).to_string(),
    );
    assert_eq!(
        code(&heinzlab(&[
            "eval", "--input", &mismatch, "--op", "heinz", "--nu", "0.3"
        ])),
        2
    );
}

#[test]
fn search_is_byte_identical_and_thread_independent() {
    let args = [
        "search", "--dims", "3", "--rank", "2", "--field", "real", "--trials", "400", "--seed", "3",
    ];
    let first = heinzlab(&args);
    assert_eq!(code(&first), 0);
    let second = Command::new(env!("CARGO_BIN_EXE_heinzlab"))
        .args(args)
        .env("HEINZLAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).starts_with("seed,dim,rank_a,rank_b,nu,j,lhs,rhs,margin\n"));
}

#[test]
fn search_with_injected_pair_finds_the_reference_violation() {
    let out = heinzlab(&[
        "search",
        "--dims",
        "3",
        "--trials",
        "1",
        "--inject-reference",
        "--seed",
        "9",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert!(!rows.is_empty());
    let fields: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(fields[5], "2");
    assert!(fields[4].parse::<f64>().unwrap() < 0.13);
}
