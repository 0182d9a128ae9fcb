//! Black-box tests of the installed binary: exit codes, output shape,
//! and JSON stability.

use std::process::{Command, Output};

fn k3kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3kit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn lattice_info_reports_census_invariants() {
    let out = k3kit(&["lattice", "info", "U+D4+E8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("rank         14"));
    assert!(text.contains("signature    (1, 13)"));
    assert!(text.contains("length       2"));
    assert!(text.contains("delta        0"));
}

#[test]
fn hurwitz_replay_prints_infeasible() {
    let out = k3kit(&["replay", "hurwitz", "--genus", "0", "--degree", "2", "--ram", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "infeasible");
}

#[test]
fn unknown_surface_is_a_usage_error() {
    let out = k3kit(&["surface", "analyze", "nosuch"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn wrong_residue_class_is_a_usage_error() {
    let out = k3kit(&["zeta", "k3", "m4-x0", "--q", "19"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_verification_exits_one() {
    let out = k3kit(&["lattice", "mirror", "U+U(2)", "U+D4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_object_carries_the_four_keys() {
    let out = k3kit(&["count", "fermat", "--n", "4", "--q", "5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let obj = v.as_object().expect("one object");
    for key in ["command", "inputs", "results", "checks"] {
        assert!(obj.contains_key(key), "missing {key}");
    }
    assert_eq!(obj["results"]["count"], 0);
}

#[test]
fn json_is_stable_across_runs_and_thread_counts() {
    let a = k3kit(&["count", "surface", "m4-x0", "--q", "17", "--json", "--threads", "1"]);
    let b = k3kit(&["count", "surface", "m4-x0", "--q", "17", "--json", "--threads", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn registry_file_is_loaded_and_checked() {
    let dir = std::env::temp_dir().join("k3kit-cli-test");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("one.reg");
    std::fs::write(
        &path,
        "[surface demo]\nm = 16\nfield = Q\na2 = 1*t\na4 = t^2\na6 = t^11\n\
         fibers = I0*:0, II:inf, I1:gen x16\n",
    )
    .expect("write registry");
    let out = k3kit(&["--registry", path.to_str().expect("utf-8 path"), "surface", "analyze", "demo"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("euler     24"));
}
