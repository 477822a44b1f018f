use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const GRAPH: &str = "a b\nb c\nc d\nd a\nc e\ne f\nf c\n";

fn bigs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bigs"))
        .args(args)
        .output()
        .expect("run bigs")
}

fn ok(args: &[&str]) -> String {
    let out = bigs(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn graph_file(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("graph.txt");
    std::fs::write(&path, GRAPH).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_is_deterministic_for_a_seed() {
    let args = ["simulate", "--builtin", "thompson1990", "--replicates", "5000", "--seed", "3"];
    assert_eq!(ok(&args), ok(&args));
    let other = ok(&["simulate", "--builtin", "thompson1990", "--replicates", "5000", "--seed", "4"]);
    assert_ne!(ok(&args), other);
}

#[test]
fn report_embeds_config_seed_and_version() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    ok(&["simulate", "--builtin", "thompson1990", "--replicates", "200", "--seed", "11", "--out", s(&out)]);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 11);
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(report["config"]["input"]["builtin"], "thompson1990");
    assert!(out.join("estimates.csv").exists());
}

#[test]
fn unseeded_simulation_records_its_seed() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    ok(&["simulate", "--builtin", "thompson1990", "--replicates", "10", "--out", s(&out)]);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert!(report["seed"].is_u64());
}

#[test]
fn enumerate_edge_list_writes_all_artifacts() {
    let dir = TempDir::new().unwrap();
    let graph = graph_file(&dir);
    let out = dir.path().join("out");
    ok(&["enumerate", "--edges", s(&graph), "--motif", "k3", "--n", "2", "--out", s(&out)]);
    for name in ["estimates.csv", "inclusion.csv", "report.json"] {
        assert!(out.join(name).exists(), "{name} missing");
    }
    let csv = std::fs::read_to_string(out.join("estimates.csv")).unwrap();
    let ht = csv.lines().find(|l| l.starts_with("ht,")).unwrap();
    // One triangle: θ = 1 and HT is unbiased.
    assert!(ht.contains(",1.0000,1.0000,"), "{ht}");
}

#[test]
fn motifs_without_matches_give_header_only_csv() {
    let dir = TempDir::new().unwrap();
    let graph = graph_file(&dir);
    let text = ok(&["motifs", "--edges", s(&graph), "--motif", "k4"]);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("id,class,order,members"));
}

#[test]
fn motif_counts() {
    let dir = TempDir::new().unwrap();
    let graph = graph_file(&dir);
    let text = ok(&["motifs", "--edges", s(&graph), "--motif", "k3,c4", "--count"]);
    assert_eq!(text, "class,count\nk3,1\nc4,1\n");
}

#[test]
fn big_build_export_round_trip() {
    let dir = TempDir::new().unwrap();
    let graph = graph_file(&dir);
    let big = dir.path().join("c4.big");
    ok(&["big", "build", "--edges", s(&graph), "--motif", "c4", "--rule", "full:2", "--out", s(&big)]);
    let json = ok(&["big", "export", "--big", s(&big), "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(value.is_object());
    let again = dir.path().join("again.big");
    ok(&["big", "export", "--big", s(&big), "--format", "big", "--out", s(&again)]);
    assert_eq!(std::fs::read_to_string(&big).unwrap(), std::fs::read_to_string(&again).unwrap());
    let csv = ok(&["big", "export", "--big", s(&big), "--format", "csv"]);
    assert!(csv.lines().count() > 1);
}

#[test]
fn big_check_reports_feasibility() {
    let dir = TempDir::new().unwrap();
    let graph = graph_file(&dir);
    let text = ok(&["big", "check", "--edges", s(&graph), "--motif", "c4", "--rule", "motif-only", "--n", "2"]);
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn too_few_stages_exit_with_infeasible_status() {
    let dir = TempDir::new().unwrap();
    let graph = graph_file(&dir);
    let out = bigs(&["big", "check", "--edges", s(&graph), "--motif", "s3", "--rule", "full:1"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("raise T"), "{err}");
}

#[test]
fn sample_with_explicit_initial_sample() {
    let text = ok(&["sample", "--builtin", "thompson1990", "--s0", "2,10", "--scale", "mean"]);
    assert!(text.contains("ht,mean,289.5714,2027/7"), "{text}");
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("exp.toml");
    std::fs::write(
        &config,
        "[input]\nbuiltin = \"thompson1990\"\n[mode]\nkind = \"simulate\"\nreplicates = 100\nseed = 1\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    ok(&["run", "--config", s(&config), "--out", s(&out)]);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 1);
    let overridden = ok(&["simulate", "--config", s(&config), "--seed", "2", "--replicates", "100"]);
    let base = ok(&["simulate", "--config", s(&config)]);
    assert_ne!(overridden, base);
}

#[test]
fn errors_are_reported_with_status_one() {
    let out = bigs(&["enumerate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no input"));
    let out = bigs(&["enumerate", "--edges", "/nonexistent/graph.txt", "--motif", "k3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    let out = bigs(&["reproduce", "nope"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reproduce_writes_files_to_directory() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("t4");
    ok(&["reproduce", "table4-bigs", "--out", s(&out)]);
    let table = std::fs::read_to_string(out.join("table4.csv")).unwrap();
    assert!(table.contains("2,theta_y,,15.6000,78/5"));
}
