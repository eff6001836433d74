// Copyright 2026 the flatgeo Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn flatgeo(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flatgeo"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn summary(out: &Path) -> toml::Table {
    fs::read_to_string(out.join("summary.toml")).unwrap().parse().unwrap()
}

fn verdict_violations(s: &toml::Table) -> Vec<(String, i64)> {
    s["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| {
            (
                v["name"].as_str().unwrap().to_string(),
                v["violations"].as_integer().unwrap(),
            )
        })
        .collect()
}

#[test]
fn verify_passes_up_to_length_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = flatgeo(&["--surface", "L-origami-3", "--command", "verify", "--L-grid", "1,2,3"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(dir.path());
    assert_eq!(s["status"].as_str(), Some("ok"));
    let v = verdict_violations(&s);
    assert!(v.len() >= 11);
    assert!(v.iter().all(|(_, n)| *n == 0), "{v:?}");
    assert!(!dir.path().join("witnesses.txt").exists());
    let table = fs::read_to_string(dir.path().join("count_table.csv")).unwrap();
    assert!(table.starts_with("L,K,count_G_star,count_C0,max_m_observed,c0_bound_ok,g_star_bound_ok\n"));
    assert!(table.contains("\n3,,236,1044,"));
}

#[test]
fn verify_reports_violations_with_witnesses() {
    // four distinct connections first appear in a simple arc at L = 4
    let dir = tempfile::tempdir().unwrap();
    let o = flatgeo(&["--surface", "L-origami-3", "--command", "verify", "--L-grid", "1,2,3,4"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let s = summary(dir.path());
    assert_eq!(s["status"].as_str(), Some("verification_failed"));
    let witnesses = fs::read_to_string(dir.path().join("witnesses.txt")).unwrap();
    assert!(witnesses.lines().all(|l| l.starts_with("simple arc uses at most 2g-1 connections")));
    assert!(!witnesses.is_empty());
}

#[test]
fn malformed_grid_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let o = flatgeo(&["--surface", "L-origami-3", "--command", "count", "--L-grid", "3,1"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--L-grid"));
    let o = flatgeo(&["--surface", "L-origami-3", "--command", "count", "--K-grid", "inf,2"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--K-grid"));
}

#[test]
fn surface_selection_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = flatgeo(&["--command", "count"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let o = flatgeo(&["--surface", "torus", "--command", "count"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--surface"));
    let o = flatgeo(&["--spec", "/nonexistent/surface.toml", "--command", "count"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--spec"));
    let o = flatgeo(&["--surface", "L-origami-3", "--command", "frobnicate"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn spec_files_load() {
    let dir = tempfile::tempdir().unwrap();
    let s = flatgeo::builtin_surface("L-origami-3").unwrap();
    let doc = flatgeo::surface_file::serialize(&s.presentation());
    let path = dir.path().join("l.toml");
    fs::write(&path, doc).unwrap();
    let out = dir.path().join("out");
    let o = flatgeo(&["--spec", path.to_str().unwrap(), "--command", "enumerate-sc", "--L", "1"], &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("saddle_connections.csv")).unwrap();
    assert_eq!(csv.lines().count(), 13);
}

#[test]
fn oracle_compare_agrees_everywhere() {
    for (surface, l) in [("L-origami-3", "3"), ("regular-octagon", "2")] {
        let dir = tempfile::tempdir().unwrap();
        let o = flatgeo(&["--surface", surface, "--command", "oracle-compare", "--L", l], dir.path());
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let csv = fs::read_to_string(dir.path().join("oracle.csv")).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("canonical_key,flat_length,hyp_length,ratio,K_flat,K_hyp,agree"));
        let rows: Vec<&str> = lines.collect();
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r.ends_with(",true")));
    }
}

#[test]
fn tables_are_identical_across_worker_counts() {
    let mut tables = Vec::new();
    for w in ["1", "3"] {
        let dir = tempfile::tempdir().unwrap();
        let o = flatgeo(
            &["--surface", "L-origami-3", "--command", "count", "--L-grid", "1,2,3", "--workers", w],
            dir.path(),
        );
        assert_eq!(o.status.code(), Some(0));
        tables.push(fs::read(dir.path().join("count_table.csv")).unwrap());
    }
    assert_eq!(tables[0], tables[1]);
}

#[test]
fn primitive_only_emits_both_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = flatgeo(
        &["--surface", "L-origami-3", "--command", "count", "--L-grid", "2,4", "--primitive-only"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let all = fs::read_to_string(dir.path().join("count_table.csv")).unwrap();
    let prim = fs::read_to_string(dir.path().join("count_table_primitive.csv")).unwrap();
    let last = |t: &str| -> usize {
        let row = t.lines().filter(|l| l.starts_with("4,,")).next().unwrap();
        row.split(',').nth(2).unwrap().parse().unwrap()
    };
    assert!(last(&prim) < last(&all));
}

#[test]
fn exhausted_budget_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = flatgeo(
        &["--surface", "L-origami-3", "--command", "count", "--L-grid", "1,2,3", "--budget-nodes", "10"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(summary(dir.path())["status"].as_str(), Some("incomplete"));
    assert!(!dir.path().join("count_table.csv").exists());
}

#[test]
fn smoothing_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = flatgeo(&["--surface", "L-origami-3", "--command", "smoothing-check"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("smoothing.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.starts_with("t,alpha,s0,s1,t0,max_curvature,min_curvature,area,bound_ok\n"));
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn geodesic_listing() {
    let dir = tempfile::tempdir().unwrap();
    let o = flatgeo(&["--surface", "L-origami-3", "--command", "enumerate-geodesics", "--L", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("geodesics.csv")).unwrap();
    assert_eq!(csv.lines().count(), 37);
    assert_eq!(summary(dir.path())["classes"].as_integer(), Some(36));
}
