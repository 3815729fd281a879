use std::path::Path;
use std::process::{Command, Output};

use hpint::tableio;

fn hpint(args: &[&str]) -> Output {
    hpint_env(args, &[])
}

fn hpint_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hpint"));
    cmd.args(args).env_remove("HPINT_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_w_csv_lists_nine_rows() {
    let o = hpint(&["build", "--kind", "W", "--max-degree", "2", "--format", "csv", "--out", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).map(|l| l.rsplit_once(',').unwrap().0).collect();
    assert_eq!(
        rows,
        ["0,0,0,0", "2,0,0,0", "1,1,0,0", "2,2,0,0", "2,1,1,0", "1,1,1,1", "2,2,2,0", "2,2,1,1", "2,2,2,2"]
    );
    assert!(stderr(&o).contains("9 records"));
}

#[test]
fn build_u_m0_binary_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u0.hpit");
    let o = hpint(&["build", "--kind", "U", "--max-degree", "0", "--out", path_str(&path)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("1 records"));
    let table = tableio::read_binary(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(table.record_count(), 1);
    let (_, v) = table.records().next().unwrap();
    assert!((v - 0.183_776_298_5).abs() < 1e-10);
}

#[test]
fn build_json_meta() {
    let o = hpint(&["build", "--kind", "W", "--max-degree", "20", "--format", "json", "--out", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let meta: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(meta["record_count"], 5346);
    assert_eq!(meta["kind"], "W");
    assert_eq!(meta["arity"], 4);
}

#[test]
fn y_requires_a_w_table() {
    let o = hpint(&["build", "--kind", "Y", "--max-degree", "2", "--out", "-"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Y is derived; query it or export via --kind Y --from-w"));
}

#[test]
fn y_export_and_queries_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let w_bin = dir.path().join("w.hpit");
    let w_csv = dir.path().join("w.csv");
    let y_bin = dir.path().join("y.hpit");
    assert_eq!(hpint(&["build", "--kind", "W", "--max-degree", "5", "--out", path_str(&w_bin)]).status.code(), Some(0));
    let o = hpint(&["build", "--kind", "W", "--max-degree", "5", "--format", "csv", "--out", path_str(&w_csv)]);
    assert_eq!(o.status.code(), Some(0));
    let o = hpint(&["build", "--kind", "Y", "--from-w", path_str(&w_bin), "--out", path_str(&y_bin)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let y = tableio::read_y_binary(std::fs::File::open(&y_bin).unwrap()).unwrap();
    assert_eq!(y.max_degree(), 5);

    let from_bin = stdout(&hpint(&["query", "--kind", "Y", "--indices", "3,2,1,0", "--table", path_str(&w_bin)]));
    let from_csv = stdout(&hpint(&["query", "--kind", "Y", "--indices", "3,2,1,0", "--table", path_str(&w_csv)]));
    assert_eq!(from_bin, from_csv);
    let (_, v) = y.records().iter().find(|(k, _)| *k == [3, 2, 1, 0]).unwrap();
    assert_eq!(from_bin.trim().parse::<f64>().unwrap().to_bits(), v.to_bits());

    let o = hpint(&["query", "--kind", "U", "--indices", "0,0,0,0,0,0", "--table", path_str(&w_bin)]);
    assert_eq!(o.status.code(), Some(2));
    let o = hpint(&["build", "--kind", "Y", "--from-w", path_str(&w_bin), "--max-degree", "6", "--out", "-", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn query_matches_csv_bit_for_bit() {
    let o = hpint(&["build", "--kind", "U", "--max-degree", "3", "--format", "csv", "--out", "-"]);
    for line in stdout(&o).lines().skip(1).step_by(7) {
        let (idx, value) = line.rsplit_once(',').unwrap();
        let q = hpint(&["query", "--kind", "U", "--indices", idx, "--max-degree", "3"]);
        let printed: f64 = stdout(&q).trim().parse().unwrap();
        assert_eq!(printed.to_bits(), value.parse::<f64>().unwrap().to_bits(), "{idx}");
    }
}

#[test]
fn query_examples() {
    let o = hpint(&["query", "--kind", "Y", "--indices", "2,1,1,0", "--max-degree", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("0.846284375321634"));
    let o = hpint(&["query", "--kind", "W", "--indices", "1,0,0,0", "--max-degree", "1"]);
    assert_eq!(stdout(&o), "0\n");
    assert!(stderr(&o).contains("odd-parity"));
    let o = hpint(&["query", "--kind", "Y", "--indices", "1,1,2,0"]);
    assert_eq!(stdout(&o), "0\n");
    assert!(stderr(&o).contains("y-selection-rule"));
    let o = hpint(&["query", "--kind", "U", "--indices", "1,1,1,1,1,1", "--max-degree", "1"]);
    assert!(stdout(&o).starts_with("0.10209794"));
}

#[test]
fn exit_codes() {
    assert_eq!(hpint(&["query", "--kind", "W", "--indices", "1,2"]).status.code(), Some(2));
    assert_eq!(hpint(&["query", "--kind", "W", "--indices", "1,2,x,0"]).status.code(), Some(2));
    assert_eq!(hpint(&["bench", "--kind", "Y", "--max-degree", "4"]).status.code(), Some(2));
    assert_eq!(hpint(&["build", "--kind", "Q", "--max-degree", "4", "--out", "-"]).status.code(), Some(2));
    let o = hpint(&["build", "--kind", "U", "--max-degree", "10", "--out", "-", "--mem-cap", "1000"]);
    assert_eq!(o.status.code(), Some(3));
    let o = hpint(&["query", "--kind", "W", "--indices", "0,0,0,0", "--table", "/nonexistent/table.hpit"]);
    assert_eq!(o.status.code(), Some(4));
    let o = hpint(&["build", "--kind", "W", "--max-degree", "2", "--out", "/nonexistent/dir/w.hpit"]);
    assert_eq!(o.status.code(), Some(4));
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.hpit");
    std::fs::write(&junk, b"HPIT\x01\x00\x00\x04\x02\x00").unwrap();
    let o = hpint(&["query", "--kind", "W", "--indices", "0,0,0,0", "--table", path_str(&junk)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("truncated"));
}

#[test]
fn verify_reports_and_exit_codes() {
    let o = hpint(&["verify", "--kind", "W", "--max-degree", "10", "--oracle", "exact", "--tol", "1e-10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("max relative error"));
    let o = hpint(&["verify", "--kind", "U", "--max-degree", "6", "--oracle", "both", "--tol", "1e-10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = hpint(&["verify", "--kind", "W", "--max-degree", "4", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn bench_reports_entry_counts() {
    let o = hpint(&["bench", "--kind", "W", "--max-degree", "60"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("entries: 317936"));
    let o = hpint(&["bench", "--kind", "U", "--max-degree", "20", "--repeat", "2"]);
    assert!(stdout(&o).contains("entries: 115258"));
    assert!(stdout(&o).contains("table bytes:"));
}

#[test]
fn thread_cap_from_environment() {
    let o = hpint_env(&["query", "--kind", "W", "--indices", "4,2,2,0"], &[("HPINT_THREADS", "2")]);
    let base = hpint(&["query", "--kind", "W", "--indices", "4,2,2,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), stdout(&base));
    let o = hpint_env(&["query", "--kind", "W", "--indices", "0,0,0,0"], &[("HPINT_THREADS", "zero")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn two_boson_demo() {
    let o = hpint(&["demo", "two-boson", "--g", "0.1", "--max-degree", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("basis size = 231"));
    let e: f64 = out.lines().next().unwrap().trim_start_matches("E = ").parse().unwrap();
    assert!((e - 1.039_894_2).abs() < 5e-3);
}
