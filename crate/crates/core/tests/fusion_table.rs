//! The assembled table, its emitted forms and the command-line front end.

mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use orbifold_fusion::config::{GroupConfig, Registry};
use orbifold_fusion::table::{build_table, check_symmetries, emit, Format, TwistedModule, TwistedStatus, Verdict};
use orbifold_fusion::ModuleParams;

use common::criteria::{self, MODULES};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbifold-fusion")).args(args).output().expect("binary runs")
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("orbifold-fusion-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Copy of the shipped registry in `dir`, with absolute corpus paths and the
/// group data replaced by `group_text`.
fn registry_copy(dir: &Path, group_text: &str) -> PathBuf {
    let data = common::data_dir();
    let text = std::fs::read_to_string(data.join("registry.toml"))
        .unwrap()
        .replace("corpus = \"appendix/", &format!("corpus = \"{}/appendix/", data.display()));
    std::fs::write(dir.join("group.toml"), group_text).unwrap();
    let path = dir.join("registry.toml");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn table_matches_the_expected_rules() {
    let reg = common::registry();
    criteria::fusion_table(&reg).unwrap();
}

#[test]
fn symmetries_hold_on_every_entry() {
    let reg = common::registry();
    let table = build_table(&reg, &common::group_config(), &[]);
    let sym = check_symmetries(&table, &reg).unwrap();
    assert_eq!(sym.checked, 2 * table.reports.len());
    assert!(sym.violations.is_empty());
    assert_eq!(table.twisted, TwistedStatus::NotChecked);
}

#[test]
fn records_list_the_nonzero_entries() {
    let reg = common::registry();
    let table = build_table(&reg, &common::group_config(), &[]);
    let text = emit(&table, Format::Records);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("l1,l2,l3,multiplicity"));
    let expected: usize = MODULES
        .iter()
        .flat_map(|a| MODULES.iter().flat_map(move |b| MODULES.iter().map(move |c| (a, b, c))))
        .filter(|(a, b, c)| common::expected_multiplicity(a, b, c) > 0)
        .count();
    assert_eq!(lines.count(), expected);
    assert!(text.contains("Wa,Wa,Ma,2\n"));
}

#[test]
fn twisted_candidates_are_reported() {
    let reg = common::registry();
    let twisted = vec![TwistedModule { name: "T".into(), params: ModuleParams::new(common::q("1/15"), common::q("0")) }];
    let table = build_table(&reg, &common::group_config(), &twisted);
    let tw: Vec<_> = table.reports.iter().filter(|r| r.twisted).collect();
    assert_eq!(tw.len(), 64);
    assert!(tw.iter().all(|r| r.lower == 0 && r.verdict != Verdict::Violated));
    match table.twisted {
        TwistedStatus::Checked { candidates, total, .. } => assert_eq!((candidates, total), (1, 64)),
        TwistedStatus::NotChecked => panic!("twisted candidates were supplied"),
    }
}

#[test]
fn cli_prints_the_table() {
    let reg = common::data_dir().join("registry.toml");
    let out = cli(&["fusion-table", "--config", reg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 37);
    assert!(text.contains("Ma x Ma = M0(0) + M0(1) + M0(2) + 2 Ma\n"));
    assert!(text.contains("Wa x Wa = M0(0) + M0(1) + M0(2) + W0(0) + W0(1) + W0(2) + 2 Ma + 2 Wa\n"));
    assert!(text.contains("M0(1) x M0(1) = M0(2)\n"));
    assert!(text.ends_with("twisted-sector candidates: not checked\n"));
}

#[test]
fn cli_flags_inconsistent_group_data() {
    // Swapping the characters of M0(1) and M0(2) alone contradicts the Zhu
    // bounds, e.g. M0(1) x W0(0) would reach W0(2). Swapping every pair is
    // only a relabelling.
    let dir = scratch_dir("swap");
    let group = std::fs::read_to_string(common::data_dir().join("group.toml")).unwrap();
    let (plus, minus) = ("\"-1/2 + 1/2*s3\", \"-1/2 - 1/2*s3\"", "\"-1/2 - 1/2*s3\", \"-1/2 + 1/2*s3\"");
    let swapped = group.replacen(plus, "@", 1).replacen(minus, plus, 1).replacen('@', minus, 1);
    assert_ne!(swapped, group);
    let reg = registry_copy(&dir, &swapped);
    let out = cli(&["fusion-table", "--config", reg.to_str().unwrap(), "--format", "records"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("violated("));

    let reg = Registry::load(&reg).unwrap();
    let table = build_table(&reg, &GroupConfig::parse(&swapped).unwrap(), &[]);
    assert!(table.has_violation());
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn cli_accepts_an_empty_registry() {
    let dir = scratch_dir("empty");
    let path = dir.join("registry.toml");
    std::fs::write(&path, "").unwrap();
    let out = cli(&["fusion-table", "--config", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("no modules"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn cli_verifies_a_corpus() {
    let wa = common::data_dir().join("appendix/wa.txt");
    let out = cli(&["verify-singular", "--vectors", wa.to_str().unwrap()]);
    assert!(out.status.success());
    let lines: Vec<serde_json::Value> =
        String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines.iter().all(|l| l["singular"] == true && l["h"] == "1/10"));

    let dir = scratch_dir("corpus");
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "x: L(-2)\n").unwrap();
    let out = cli(&["verify-singular", "--vectors", bad.to_str().unwrap(), "--h", "1/2", "--k", "0"]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn cli_reports_the_zhu_bound() {
    let reg = common::data_dir().join("registry.toml");
    let out = cli(&["zhu-bound", "--module", "Wa", "--left", "Ma", "--right", "Wa", "--config", reg.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("bound 2\n"));
}

#[test]
fn cli_rejects_unknown_modules() {
    let reg = common::data_dir().join("registry.toml");
    let out = cli(&["zhu-bound", "--module", "X", "--left", "Ma", "--right", "Wa", "--config", reg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
