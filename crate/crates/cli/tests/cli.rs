use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pskh(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pskh")).current_dir(dir).env_remove("PSKH_WORKERS").args(args).output().expect("spawn pskh")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn manifest(dir: &Path, cmd: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("results").join(format!("{cmd}.manifest.json"))).unwrap()).unwrap()
}

#[test]
fn complexity_iterative_table_value() {
    let dir = tempfile::tempdir().unwrap();
    let o = pskh(dir.path(), &["complexity", "--estimator", "iter", "--M", "64", "--numax", "3", "--nnb", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("Xi = 4846"), "{}", stdout(&o));
}

#[test]
fn table3_preset_writes_all_rows() {
    let dir = tempfile::tempdir().unwrap();
    assert!(pskh(dir.path(), &["complexity", "--preset", "table3"]).status.success());
    let csv = std::fs::read_to_string(dir.path().join("results/table3.csv")).unwrap();
    let xi: Vec<&str> = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(xi, ["4096", "262144", "16384", "4221", "4846"]);
}

#[test]
fn gen_papsk_qpsk_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = pskh(dir.path(), &["gen", "--method", "papsk", "--n", "1", "--M", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("d_min = 1.4142"));
    let text = std::fs::read_to_string(dir.path().join("results/papsk_n1_M4.txt")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "PSKH v1 n=1 M=4 Es=1 gen=PAPSK");
    let pts: Vec<(f64, f64)> = lines
        .map(|l| {
            let v: Vec<f64> = l.split_whitespace().map(|x| x.parse().unwrap()).collect();
            (v[0], v[1])
        })
        .collect();
    let expect = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
    for (p, e) in pts.iter().zip(expect) {
        assert!((p.0 - e.0).abs() < 1e-12 && (p.1 - e.1).abs() < 1e-12);
    }
}

#[test]
fn gen_is_byte_identical_on_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["gen", "--method", "kmc", "--n", "2", "--M", "16", "--seed", "7"];
    assert!(pskh(dir.path(), &args).status.success());
    let first = std::fs::read(dir.path().join("results/kmc_n2_M16.txt")).unwrap();
    assert!(pskh(dir.path(), &args).status.success());
    assert_eq!(first, std::fs::read(dir.path().join("results/kmc_n2_M16.txt")).unwrap());
}

#[test]
fn paspr_sinc2_four_antennas() {
    let dir = tempfile::tempdir().unwrap();
    let o = pskh(dir.path(), &["paspr", "--pulse", "sinc2", "--n", "4"]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("results/paspr.csv")).unwrap();
    let row = csv.lines().nth(1).unwrap();
    let v: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
    assert!((v - 1.76).abs() <= 0.05, "{row}");
}

#[test]
fn infeasible_trellis_exits_3_with_required_xi() {
    let dir = tempfile::tempdir().unwrap();
    let o =
        pskh(dir.path(), &["ser", "--method", "papsk", "--n", "3", "--M", "64", "--signaling", "sinc2", "--estimator", "va", "--nu", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Xi = 1073741824"));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(pskh(dir.path(), &["ser", "--estimator", "bogus"]).status.code(), Some(2));
    assert_eq!(pskh(dir.path(), &["ser", "--preset", "fig99"]).status.code(), Some(2));
    std::fs::write(dir.path().join("bad.toml"), "[ser]\nunknown-key = 1\n").unwrap();
    assert_eq!(pskh(dir.path(), &["--config", "bad.toml", "complexity"]).status.code(), Some(2));
    assert_eq!(pskh(dir.path(), &["--config", "missing.toml", "complexity"]).status.code(), Some(2));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.toml"), "seed = 9\nout = \"from-file\"\n\n[complexity]\nestimator = \"va\"\nM = 16\nnu = 2\n")
        .unwrap();
    let o = pskh(dir.path(), &["--config", "run.toml", "complexity"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("Xi = 4096"));
    let m: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("from-file/complexity.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["seed"], 9);
    let o = pskh(dir.path(), &["--config", "run.toml", "--seed", "3", "--out", "results", "complexity", "--nu", "1"]);
    assert!(stdout(&o).contains("Xi = 256"));
    assert_eq!(manifest(dir.path(), "complexity")["seed"], 3);
}

#[test]
fn manifest_records_run() {
    let dir = tempfile::tempdir().unwrap();
    assert!(pskh(dir.path(), &["--workers", "2", "complexity", "--preset", "table3"]).status.success());
    let m = manifest(dir.path(), "complexity");
    assert_eq!(m["command"], "complexity");
    assert_eq!(m["seed"], 1);
    assert_eq!(m["workers"], 2);
    assert!(m["version"].as_str().unwrap().starts_with(env!("CARGO_PKG_VERSION")));
    assert!(m["wall_time_s"].as_f64().unwrap() >= 0.0);
    assert_eq!(m["config"].as_array().unwrap().len(), 5);
    assert_eq!(m["outputs"][0], "results/table3.csv");
}

fn small_ser(dir: &Path, workers: &str) -> String {
    let o = pskh(
        dir,
        &[
            "--workers",
            workers,
            "--out",
            workers,
            "ser",
            "--method",
            "papsk",
            "--n",
            "2",
            "--M",
            "16",
            "--channel",
            "rayleigh",
            "--signaling",
            "sinc2",
            "--estimator",
            "dfe",
            "--ebn0",
            "-2,6,inf",
            "--max-symbols",
            "20000",
            "--frame-len",
            "500",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read_to_string(dir.join(workers).join("ser.csv")).unwrap()
}

#[test]
fn ser_csv_independent_of_workers() {
    let dir = tempfile::tempdir().unwrap();
    let one = small_ser(dir.path(), "1");
    assert_eq!(one, small_ser(dir.path(), "3"));
    let rows: Vec<Vec<&str>> = one.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0], ["ebn0_db", "ser", "symbols", "errors"]);
    assert_eq!(rows.len(), 4);
    let ser: Vec<f64> = rows[1..].iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(ser[0] > ser[1]);
    assert_eq!(ser[2], 0.0);
}

#[test]
fn capacity_accepts_negative_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = pskh(dir.path(), &["capacity", "--method", "papsk", "--n", "1", "--M", "4", "--ebn0", "-2,30", "--draws", "2000"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("results/capacity.csv")).unwrap();
    let mi: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert!(mi[0] < mi[1] && (mi[1] - 2.0).abs() < 1e-3);
}

#[test]
fn spectrum_reports_bandwidths() {
    let dir = tempfile::tempdir().unwrap();
    let o = pskh(dir.path(), &["spectrum", "--pulse", "rrc", "--method", "papsk", "--n", "1", "--M", "4", "--symbols", "4096"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(dir.path(), "spectrum");
    let b1 = m["results"].as_array().unwrap().last().unwrap()["bandwidth"].as_f64().unwrap();
    assert!((b1 - 1.25).abs() < 0.05, "{b1}");
    let csv = std::fs::read_to_string(dir.path().join("results/spectrum.csv")).unwrap();
    assert!(csv.starts_with("freq,psd\n"));
}
