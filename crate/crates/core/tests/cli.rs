use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenes() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenes")
}

fn nlphase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlphase"))
        .args(args)
        .env_remove("NLPHASE_THREADS")
        .output()
        .unwrap()
}

fn scene_arg(name: &str) -> String {
    scenes().join(name).to_str().unwrap().to_string()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn energy_prints_terms_and_dumps_density() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("density.bin");
    let out = nlphase(&["energy", "--scene", &scene_arg("slab.json"), "--density-dump", dump.to_str().unwrap()]);
    let v = json(&out);
    let total = v["total"].as_f64().unwrap();
    let parts = ["potential", "nonlocal", "surfactant"].map(|k| v[k].as_f64().unwrap());
    assert_eq!(total, parts.iter().sum::<f64>());
    let bytes = fs::read(dump).unwrap();
    assert_eq!(&bytes[..4], b"NLPD");
    assert_eq!(bytes.len(), 4 + 4 + 4 + 2 * 24 + 64 * 64 * 8);
}

#[test]
fn limit_of_slab_is_k_plus_defect() {
    let v = json(&nlphase(&["limit", "--scene", &scene_arg("slab.json")]));
    assert_eq!(v["k"], 4.0);
    assert_eq!(v["total"], 4.0);
}

#[test]
fn sweep_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = nlphase(&["sweep", "--scene", &scene_arg("slab_reduced.json"), "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(csv.starts_with("eps,term1,term2,term3,total,mass_over_ln,L1_defect\n"));
    assert_eq!(csv.lines().count(), 5);
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("sweep.json")).unwrap()).unwrap();
    assert!(meta["fits"]["total"]["limit"].is_f64());
}

#[test]
fn threads_flag_does_not_change_output() {
    let a = nlphase(&["energy", "--scene", &scene_arg("slab.json"), "--threads", "1"]);
    let b = nlphase(&["energy", "--scene", &scene_arg("slab.json"), "--threads", "4", "--tile", "7"]);
    assert_eq!(json(&a)["total"], json(&b)["total"]);
}

#[test]
fn recovery_writes_fields_per_ladder_entry() {
    let dir = tempfile::tempdir().unwrap();
    let out = nlphase(&["recovery", "--scene", &scene_arg("slab.json"), "--ladder", "0.2,0.1", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["u_00.bin", "u_01.bin", "rho_00.bin", "rho_01.bin", "recovery.csv", "recovery.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}

#[test]
fn unresolvable_eps_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = nlphase(&["recovery", "--scene", &scene_arg("slab.json"), "--ladder", "1e-3", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not resolvable"));
}

#[test]
fn failed_bound_check_exits_4() {
    let scene = fs::read_to_string(scenes().join("bounds.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&scene).unwrap();
    v["bounds"]["cylinders"][0]["fitted_c"] = serde_json::json!(1e-6);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scene.json");
    fs::write(&path, v.to_string()).unwrap();
    let out = nlphase(&["bounds", "--scene", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn bad_scene_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scene.json");
    fs::write(&path, r#"{"grid": {"origin": [0], "extent": [1, 1], "cells": [4, 4]}}"#).unwrap();
    let out = nlphase(&["energy", "--scene", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let missing = nlphase(&["energy", "--scene", dir.path().join("nope.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn invalid_thread_env_exits_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_nlphase"))
        .args(["energy", "--scene", &scene_arg("slab.json")])
        .env("NLPHASE_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NLPHASE_THREADS"));
}
