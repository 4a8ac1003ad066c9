//! Runs the `wqpe` binary end to end.

use std::path::Path;
use std::process::{Command, Output};

fn wqpe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wqpe")).args(args).env_remove("WQPE_TABLES").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn write_matrix(path: &Path, diag: &[f64], gap: f64) {
    let d = diag.len();
    let re: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| if i == j { diag[i] } else { 0.0 }).collect()).collect();
    let im = vec![vec![0.0; d]; d];
    let file = serde_json::json!({"dim": d, "matrix_re": re, "matrix_im": im, "one_norm": 1.0, "gap": gap});
    std::fs::write(path, serde_json::to_vec(&file).unwrap()).unwrap();
}

#[test]
fn estimate_covers_every_table_case() {
    let o = wqpe(&["estimate"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("system,observable,window,l,m,beta,n_o,total_toffoli,qubit_estimate\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 24);
    for pair in rows.chunks(2) {
        let (rect, kaiser) = (&pair[0], &pair[1]);
        assert_eq!((rect[2].as_str(), kaiser[2].as_str()), ("rect", "kaiser:auto"));
        assert_eq!(rect[..2], kaiser[..2]);
        let t = |r: &Vec<String>| r[7].parse::<u128>().unwrap();
        assert!(t(kaiser) < t(rect), "{rect:?} vs {kaiser:?}");
    }
}

#[test]
fn estimate_single_case_and_json() {
    let o = wqpe(&["estimate", "water", "kinetic", "--window", "rect", "--highwater", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let case = &v[0];
    assert_eq!(case["l"], 12);
    assert_eq!(case["n_o"], 22);
    assert!(case["qubit_estimate"].is_i64());
}

#[test]
fn estimate_errors_map_to_exit_codes() {
    let unknown = wqpe(&["estimate", "argon"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("water, ammonia, p450, p-benzyne"));
    assert_eq!(wqpe(&["estimate", "water", "kinetic", "--epsilon", "1e-30"]).status.code(), Some(4));
    assert_eq!(wqpe(&["estimate", "--split", "1,2"]).status.code(), Some(2));
}

#[test]
fn tables_override_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let mut tables: serde_json::Value = serde_json::from_str(wqpe::resources::EMBEDDED_TABLES).unwrap();
    tables["systems"].as_array_mut().unwrap().truncate(1);
    tables["systems"][0]["name"] = "custom".into();
    let path = dir.path().join("tables.json");
    std::fs::write(&path, serde_json::to_vec(&tables).unwrap()).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_wqpe"))
        .args(["estimate", "--window", "rect"])
        .env("WQPE_TABLES", &path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[0] == "custom"));
    let missing = Command::new(env!("CARGO_BIN_EXE_wqpe"))
        .args(["estimate"])
        .env("WQPE_TABLES", dir.path().join("absent.json"))
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn window_amplitudes_for_zero_beta_match_flat() {
    let column = |w: &str| {
        let o = wqpe(&["window", "--window", w, "--n", "5"]);
        assert_eq!(o.status.code(), Some(0));
        stdout(&o).lines().map(|l| l.split(',').take(2).collect::<Vec<_>>().join(",")).collect::<Vec<_>>()
    };
    assert_eq!(column("kaiser:0"), column("rect"));
}

#[test]
fn window_kaiser_column_is_normalized() {
    let o = wqpe(&["window", "--window", "kaiser:10", "--n", "6", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let sum: f64 = v["amplitudes"].as_array().unwrap().iter().map(|a| a.as_f64().unwrap().powi(2)).sum();
    assert!((sum - 1.0).abs() <= 1e-12);
}

#[test]
fn overlap_reports_cutoff() {
    let o = wqpe(&["overlap", "--l", "4", "--m", "2", "--grid", "256", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["cutoff"], 0.0625);
    assert!(v["max_contamination"].as_f64().unwrap() < 1e-4);
    assert_eq!(v["samples"].as_array().unwrap().len(), 256);
}

#[test]
fn emulate_writes_reproducible_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = wqpe(&["emulate", "--seed", "31", "--dim", "3", "--format", "json", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert_eq!(report.as_object().unwrap().len(), 8);
    assert_eq!(report["success_flag"], true);
}

#[test]
fn emulate_from_matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.json");
    let f = dir.path().join("f.json");
    write_matrix(&h, &[-0.8, 0.4, 0.9], 1.2);
    write_matrix(&f, &[0.3, -0.5, 0.2], 0.7);
    let args = ["emulate", "--hamiltonian", h.to_str().unwrap(), "--observable", f.to_str().unwrap(), "--m", "2", "--n-outer", "18", "--format", "json"];
    let o = wqpe(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((r["truth"].as_f64().unwrap() - 0.3).abs() < 1e-12);
    assert!(r["realized_error"].as_f64().unwrap() <= r["bound"].as_f64().unwrap());
}

#[test]
fn emulate_gap_violation_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.json");
    write_matrix(&h, &[0.1, 0.12], 0.02);
    let o = wqpe(&["emulate", "--hamiltonian", h.to_str().unwrap(), "--observable", "identity", "--l", "3", "--m", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("gap"));
}

#[test]
fn paired_emulation_favours_kaiser() {
    let o = wqpe(&["emulate", "--paired", "40", "--m", "2", "--n-outer", "22", "--seed", "99", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["mean_kaiser_error"].as_f64().unwrap() < v["mean_rectangular_error"].as_f64().unwrap());
    assert!(v["win_fraction"].as_f64().unwrap() > 0.5);
}

#[test]
fn verify_suites_exit_zero() {
    for (suite, count) in [("lemma1", "50"), ("bounds", "200")] {
        let o = wqpe(&["verify", "--suite", suite, "--count", count, "--seed", "7"]);
        assert_eq!(o.status.code(), Some(0));
        assert!(String::from_utf8_lossy(&o.stderr).contains(&format!("{suite}: checked {count}")));
    }
    assert_eq!(wqpe(&["verify", "--suite", "unknown"]).status.code(), Some(2));
}

#[test]
fn saved_config_replays_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let first = wqpe(&["overlap", "--l", "3", "--m", "1", "--grid", "64", "--save-config", cfg.to_str().unwrap()]);
    assert_eq!(first.status.code(), Some(0));
    let replay = wqpe(&["run", cfg.to_str().unwrap()]);
    assert_eq!(replay.status.code(), Some(0));
    assert_eq!(first.stdout, replay.stdout);
    let saved: serde_json::Value = serde_json::from_slice(&std::fs::read(&cfg).unwrap()).unwrap();
    assert_eq!(saved["command"]["overlap"]["l"], 3);
}
