use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use domsets::binom::binomial;
use domsets_cli::ExperimentConfig;

fn domsets(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_domsets"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_out(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn run_config(dir: &Path, name: &str, text: &str) -> (Output, String) {
    let cfg = dir.join(format!("{name}.toml"));
    let csv = dir.join(format!("{name}.csv"));
    fs::write(&cfg, text).unwrap();
    let out = domsets(&["experiment", "--config", path_str(&cfg), "--out", path_str(&csv)]);
    let body = fs::read_to_string(&csv).unwrap_or_default();
    (out, body)
}

fn records(csv_text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(csv_text.as_bytes())
        .records()
        .map(|r| r.unwrap())
        .collect()
}

// column positions in the fixed header
const GAMMA_MEASURED: usize = 6;
const K: usize = 7;
const STATUS: usize = 8;
const COUNT: usize = 9;
const FRACTION: usize = 10;

#[test]
fn gjj_experiment_rows() {
    let dir = tempfile::tempdir().unwrap();
    let (out, body) = run_config(
        dir.path(),
        "gjj",
        "model = \"gjj\"\ngamma_target = 3\nn = 9\ntrials = 1\nseed = 0\nk_list = [2, 3]\nmode = \"exact\"\n",
    );
    assert!(out.status.success());
    let rows = records(&body);
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][COUNT], "0");
    assert_eq!(&rows[1][COUNT], "45");
}

#[test]
fn complete_graph_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let (out, body) = run_config(
        dir.path(),
        "k5",
        "model = \"er\"\ngamma_target = 2\nn = 5\np = 1.0\ntrials = 3\nseed = 11\nk_list = [1]\nmode = \"exact\"\n",
    );
    assert!(out.status.success());
    let rows = records(&body);
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert_eq!(&r[COUNT], "5");
        assert_eq!(&r[GAMMA_MEASURED], "1");
    }
}

#[test]
fn rows_are_consistent_with_measured_gamma() {
    let dir = tempfile::tempdir().unwrap();
    let (out, body) = run_config(
        dir.path(),
        "er",
        "model = \"er\"\ngamma_target = 3\nn = [40, 60]\ntrials = 3\nseed = 5\nk_list = [1, 2, 3, 4]\nmode = \"exact\"\n",
    );
    assert!(out.status.success());
    let rows = records(&body);
    assert_eq!(rows.len(), 2 * 3 * 4);
    for r in &rows {
        let n: u64 = r[2].parse().unwrap();
        let k: u64 = r[K].parse().unwrap();
        let gamma: u64 = r[GAMMA_MEASURED].parse().unwrap();
        let count: num_bigint::BigUint = r[COUNT].parse().unwrap();
        let total = binomial(n, k);
        assert!(count <= total);
        assert_eq!(count == 0u32.into(), k < gamma);
        let fraction: f64 = r[FRACTION].parse().unwrap();
        let expected = count.to_string().parse::<f64>().unwrap() / total.to_string().parse::<f64>().unwrap();
        assert!((fraction - expected).abs() <= 1e-12 * expected.max(1e-300));
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let text = "model = \"er\"\ngamma_target = 3\nn = 50\ntrials = 6\nseed = 99\nk_list = [2, 3]\nmode = \"sample\"\nsamples_per_graph = 500\n";
    let (_, a) = run_config(dir.path(), "a", text);
    let (_, b) = run_config(dir.path(), "b", text);
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn config_errors_exit_two_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let (out, _) = run_config(
        dir.path(),
        "bad",
        "model = \"er\"\ngamma_target = 3\nn = 50\ntrials = 0\nseed = 1\nk_list = [2]\nmode = \"exact\"\n",
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trials"));
}

#[test]
fn budget_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let all = "model = \"er\"\ngamma_target = 3\nn = 100\ntrials = 2\nseed = 1\nk_list = [3]\nmode = \"exact\"\nbudget = 1000\n";
    let (out, body) = run_config(dir.path(), "all", all);
    assert_eq!(out.status.code(), Some(3));
    assert!(records(&body).iter().all(|r| &r[STATUS] == "budget_exceeded" && r[COUNT].is_empty()));

    let some = all.replace("[3]", "[1, 3]");
    let (out, body) = run_config(dir.path(), "some", &some);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(records(&body).len(), 4);
}

#[test]
fn config_file_round_trip() {
    let text = "model = \"er\"\ngamma_target = 2\nn = [200, 400]\ndelta = 0.5\nepsilon_rule = \"threshold\"\ntrials = 3\nseed = 8\nk_list = [1, 2]\nmode = \"sample\"\nsamples_per_graph = 100\ntiming = true\n";
    let cfg = ExperimentConfig::from_toml(text).unwrap();
    let canonical = cfg.to_toml();
    assert_eq!(ExperimentConfig::from_toml(&canonical).unwrap(), cfg);
    assert_eq!(ExperimentConfig::from_toml(&canonical).unwrap().to_toml(), canonical);
}

#[test]
fn gen_analyze_count_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let out = domsets(&["gen", "--model", "gjj", "--n", "12", "--out", path_str(&g)]);
    assert!(out.status.success());

    let a = json_out(&domsets(&["analyze", "--in", path_str(&g)]));
    assert_eq!(a["domination_number"], 3);
    assert_eq!(a["row_zero_profile"]["z_max"], 8);

    let c = json_out(&domsets(&["count", "--in", path_str(&g), "--k", "3"]));
    assert_eq!(c["dominating"], "112");
    assert_eq!(c["total"], "220");

    let s = json_out(&domsets(&["count", "--in", path_str(&g), "--k", "3", "--sample", "2000", "--seed", "3"]));
    let point = s["point"].as_f64().unwrap();
    assert!((point - 112.0 / 220.0).abs() <= s["half_width"].as_f64().unwrap() + 0.02);

    let out = domsets(&["count", "--in", path_str(&g), "--k", "6", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gen_er_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        let out = domsets(&["gen", "--model", "er", "--n", "80", "--gamma", "3", "--delta", "0.5", "--seed", "4", "--out", path_str(p)]);
        assert!(out.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let out = domsets(&["gen", "--model", "er", "--n", "80", "--out", path_str(&a)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bounds_and_oracle_json() {
    let b = json_out(&domsets(&["bounds", "--n", "1000000", "--gamma", "3", "--epsilon", "0.01"]));
    assert_eq!(b["row_zero_threshold"]["a_star"], 1000);
    assert_eq!(b["row_zero_threshold"]["witness_holds"], true);
    assert!(b["moments"]["variance"]["value"].as_f64().unwrap() >= 0.0);
    assert!(b["bracket"]["total"].is_string());

    let b2 = json_out(&domsets(&["bounds", "--n", "50", "--gamma", "2", "--epsilon", "0.2"]));
    assert!(b2["bracket"]["error"].is_string());

    let o = json_out(&domsets(&["oracle", "--n", "4", "--gamma", "2", "--epsilon", "0.3"]));
    let exact = o["enumerated"]["expectation"].as_f64().unwrap();
    let formula = o["formula_expected"].as_f64().unwrap();
    assert!((exact - formula).abs() <= 1e-9 * exact);

    let out = domsets(&["oracle", "--n", "9", "--gamma", "2", "--epsilon", "0.3"]);
    assert_eq!(out.status.code(), Some(2));
}
