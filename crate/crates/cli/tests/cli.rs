use std::path::Path;
use std::process::{Command, Output};

use transversal_core::experiments::{InstanceFile, InstanceMeta};
use transversal_core::{Digraph, DigraphCollection};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_transversal")).args(args).output().unwrap()
}

fn write(dc: &DigraphCollection, path: &Path) {
    InstanceFile::from_collection(dc, InstanceMeta::default()).write(path).unwrap();
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn digon_solves() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("digon.json");
    let d = Digraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
    write(&DigraphCollection::uniform(&d, 2).unwrap(), &path);
    let out = run(&["solve", "thc", s(&path)]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["kind"], "hamilton-cycle");
    let mut colors: Vec<u64> = v["colors"].as_array().unwrap().iter().map(|c| c.as_u64().unwrap()).collect();
    colors.sort_unstable();
    assert_eq!(colors, [1, 2]);
}

#[test]
fn tight_witness_reports_none() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    assert_eq!(run(&["gen", "tight", "--n", "6", "--out", s(&path)]).status.code(), Some(0));
    let out = run(&["solve", "thc", s(&path)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"none\""));
}

#[test]
fn oracle_refuses_large_n() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k10.json");
    write(&DigraphCollection::uniform(&Digraph::complete(10), 10).unwrap(), &path);
    let out = run(&["oracle", "thc", s(&path)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_input_is_positioned() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"schema\": 1,\n  \"n\": 2,\n  \"m\": 1,\n  \"digraphs\": [{\"edges\": [[0, 1], [1,]]}]\n}\n").unwrap();
    let out = run(&["solve", "thc", s(&path)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5"), "{err}");

    std::fs::write(&path, r#"{"schema": 1, "n": 2, "m": 1, "digraphs": [{"edges": [[0, 7]]}]}"#).unwrap();
    let out = run(&["solve", "thc", s(&path)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("digraphs[0].edges[0]"));
}

#[test]
fn bradshaw_instances_have_matchings() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    assert_eq!(run(&["gen", "bradshaw", "--n", "5", "--seed", "3", "--out", s(&path)]).status.code(), Some(0));
    let out = run(&["solve", "pm", s(&path)]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["edges"].as_array().unwrap().len(), 5);
}

#[test]
fn small_sweep_exits_cleanly() {
    let out = run(&["sweep", "threshold", "--n-min", "4", "--n-max", "5", "--trials", "5", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["summary"]["trials"], 10);
}
