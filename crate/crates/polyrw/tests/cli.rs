//! End-to-end checks of the command-line interface: exit codes, output
//! shapes, determinism.

use std::process::{Command, Output};

fn polyrw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyrw"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_temp(name: &str, content: &str) -> String {
    let path = std::env::temp_dir().join(name);
    std::fs::write(&path, content).expect("writable temp dir");
    path.to_string_lossy().to_string()
}

#[test]
fn validate_ok_and_exit_codes() {
    let dump = polyrw(&["examples", "--dump", "monoid"]);
    assert!(dump.status.success());
    let file = write_temp("polyrw_monoid.poly", &String::from_utf8_lossy(&dump.stdout));
    let out = polyrw(&["validate", &file]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("3 rules"));
}

#[test]
fn validate_broken_file_exits_2_with_location() {
    let file = write_temp(
        "polyrw_broken.poly",
        "poly broken\n[0] *\n[1] 1 : * -> *\n[2] mu : 1 1 => (1\n",
    );
    let out = polyrw(&["validate", &file]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("4:"), "error should carry a location: {err}");
}

#[test]
fn cp_monoid_prints_five_pairs() {
    let out = polyrw(&["cp", "builtin:monoid"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("5 critical pairs"));
    // byte-determinism
    let again = polyrw(&["cp", "builtin:monoid"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn cp_json_has_format_field() {
    let out = polyrw(&["cp", "builtin:monoid", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid json");
    assert_eq!(v["format"], 1);
    assert_eq!(v["pairs"].as_array().unwrap().len(), 5);
}

#[test]
fn confluence_monoid_by_newman() {
    let out = polyrw(&["confluence", "builtin:monoid", "--assume-terminating", "--fuel", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("locally confluent"));
    assert!(text.contains("Newman"));
}

#[test]
fn nf_unit_redex() {
    let out = polyrw(&[
        "nf",
        "builtin:monoid",
        "--cell",
        "(eta * id(1)) . mu",
        "--fuel",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("id(1)"));
}

#[test]
fn render_dot_and_tikz() {
    let dot = polyrw(&["render", "builtin:monoid", "--cell", "mu", "--format", "dot"]);
    assert!(dot.status.success());
    assert!(String::from_utf8_lossy(&dot.stdout).starts_with("digraph"));
    let tikz = polyrw(&["render", "builtin:monoid", "--cell", "mu", "--format", "tikz"]);
    assert!(tikz.status.success());
    assert!(String::from_utf8_lossy(&tikz.stdout).contains("tikzpicture"));
}

#[test]
fn examples_list_and_dump_round_trip() {
    let list = polyrw(&["examples", "--list"]);
    let text = String::from_utf8_lossy(&list.stdout);
    for name in ["monoid", "symmetry", "srs-nz2", "bialgebra"] {
        assert!(text.contains(name));
    }
    let dump = polyrw(&["examples", "--dump", "symmetry"]);
    let file = write_temp("polyrw_symmetry.poly", &String::from_utf8_lossy(&dump.stdout));
    let out = polyrw(&["cp", &file]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("5 critical pairs"));
}

#[test]
fn srs_commands_work_on_two_polygraphs() {
    let out = polyrw(&["cp", "builtin:srs-nz2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("2 critical pairs"));
    assert!(text.contains("b b a"));
    assert!(text.contains("b b b"));
    let nf = polyrw(&["nf", "builtin:srs-nz2", "--cell", "b a b a b"]);
    assert_eq!(nf.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&nf.stdout).trim(), "a a b");
}

#[test]
fn oracle_agrees_on_monoid() {
    let out = polyrw(&["oracle", "builtin:monoid", "--max-size", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("agrees"));
}
