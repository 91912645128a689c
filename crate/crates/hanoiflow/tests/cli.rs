use std::fs;
use std::process::{Command, Output};

use hanoiflow::dump::read_flow;
use hanoiflow_core::msf::validate_msf;
use hanoiflow_core::{Exact, HanoiGraph, MsfProblem};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hanoiflow")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn graph_reports_structure() {
    let out = run(&["graph", "--p", "3", "--n", "2", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["vertices"], 9);
    assert_eq!(v["edges"], 12);
    let sizes: Vec<u64> = v["matchings"].as_array().unwrap().iter().map(|m| m["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, [1, 1, 1]);

    let out = run(&["graph", "--p", "4", "--n", "3"]);
    assert!(stdout(&out).contains("64 vertices"));
    assert!(stdout(&out).contains("1-2:4"));
}

#[test]
fn graph_rejects_two_pegs() {
    let out = run(&["graph", "--p", "2", "--n", "1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("p >= 3"));
}

#[test]
fn flow_outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = run(&["flow", "--p", "3", "--n", "1..4", "--format", "json", "--out", path.to_str().unwrap()]);
        assert!(out.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&fs::read(&a).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 4);
    assert_eq!(v[3]["levels"].as_array().unwrap().len(), 4);
}

#[test]
fn flow_csv_table_columns() {
    let out = run(&["flow", "--p", "3", "--n", "2..3", "--exact", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "p,n,rho,lower_bound,exact_h,witness_bound,theta_ratio\n3,2,1,1/2,2/3,2/3,6\n3,3,3,1/6,2/9,2/9,6\n"
    );
}

#[test]
fn per_commodity_flow_validates() {
    let out = run(&["flow", "--p", "4", "--n", "2", "--per-commodity", "--exact", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["validation"]["passed"], true);
    assert_eq!(v[0]["validation"]["per_commodity"], true);
}

#[test]
fn per_commodity_refused_above_budget() {
    let out = run(&["flow", "--p", "3", "--n", "5", "--per-commodity"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("243 vertices"));
}

#[test]
fn dumped_flow_is_uniform() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flow.txt");
    let out = run(&["flow", "--p", "3", "--n", "3", "--exact", "--dump", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read(&path).unwrap();
    let flow = read_flow::<Exact, _>(&text[..]).unwrap();
    let g = HanoiGraph::new(3, 3).unwrap();
    let all = Exact::from_integer(26);
    assert!(validate_msf(&flow, &MsfProblem::uniform(0..27, all, 0..27, all), &g, 0.0).is_ok());
}

#[test]
fn verify_quick_passes_and_refuses_large_instances() {
    let out = run(&["verify", "--quick"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("2/2 criteria passed"));

    let out = run(&["verify", "--p", "3", "--n", "9"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("19683 vertices") && err.contains("bounds-only"));
}

#[test]
fn oracle_subcommands() {
    let out = run(&["expansion", "--p", "3", "--n", "3", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["edge_expansion"], "2/9");
    assert_eq!(v["edge_witness"], serde_json::json!([0, 1, 2, 3, 4, 5, 6, 7, 8]));

    let out = run(&["treewidth", "--p", "4", "--n", "2", "--workers", "1"]);
    assert!(stdout(&out).contains("treewidth 5"));

    let a = run(&["expansion", "--random", "10", "--seed", "5"]);
    let b = run(&["expansion", "--random", "10", "--seed", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
