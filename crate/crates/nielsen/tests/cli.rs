use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const TWO_GENERATOR: &str = "a->abb aB; b->b aBab";
const THREE_GENERATOR: &str = "a->abc; b->cAba; c->ACab";

fn nielsen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nielsen")).args(args).env_remove("NIELSEN_THREADS").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str, args: &[&str]) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    let expected: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let out = nielsen(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let got: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(got, expected, "{name}");
    assert_eq!(got["schema"], "nielsen/1");
}

#[test]
fn golden_two_generator_remnant() {
    golden("two_generator_remnant.json", &["remnant", "--map", TWO_GENERATOR, "--format", "json"]);
}

#[test]
fn golden_two_generator_dynamics() {
    golden("two_generator_dynamics.json", &["dynamics", "--map", TWO_GENERATOR, "--n-max", "4", "--format", "json"]);
}

#[test]
fn golden_two_generator_classes() {
    golden("two_generator_nielsen_power2.json", &["nielsen", "--map", TWO_GENERATOR, "--power", "2", "--classes", "--format", "json"]);
}

#[test]
fn golden_three_generator_periodic() {
    golden(
        "three_generator_periodic.json",
        &["periodic", "--map", THREE_GENERATOR, "--n", "3", "--census", "--list", "--certified", "1", "--format", "json"],
    );
}

#[test]
fn golden_three_generator_remnant() {
    golden("three_generator_remnant.json", &["remnant", "--map", THREE_GENERATOR, "--format", "json"]);
}

#[test]
fn nielsen_prints_the_number() {
    let out = nielsen(&["nielsen", "--map", TWO_GENERATOR, "--power", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "93\n");
}

#[test]
fn census_totals() {
    let out = nielsen(&["periodic", "--map", THREE_GENERATOR, "--n", "3", "--census", "--format", "csv"]);
    let text = stdout(&out);
    assert!(text.contains("3,42,14\n"), "{text}");
    assert!(text.contains("total,46,-\n"), "{text}");
}

#[test]
fn exact_density_without_samples() {
    let out = nielsen(&["density", "--predicate", "Sl=1", "--m", "2", "--p", "2", "--samples", "0", "--exact"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("16/289"), "{}", stdout(&out));
}

#[test]
fn map_can_come_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("phi.txt");
    std::fs::write(&file, "a -> abbaB\nb -> baBab\n").unwrap();
    let out = nielsen(&["nielsen", "--map", file.to_str().unwrap(), "--power", "2"]);
    assert_eq!(stdout(&out), "19\n");
}

#[test]
fn exit_statuses() {
    let code = |args: &[&str]| nielsen(args).status.code();
    assert_eq!(code(&["remnant", "--map", TWO_GENERATOR, "--check", "Sl=2"]), Some(0));
    assert_eq!(code(&["remnant", "--map", TWO_GENERATOR, "--check", "Rk=5"]), Some(2));
    assert_eq!(code(&["nielsen", "--map", "a->1"]), Some(2));
    assert_eq!(code(&["periodic", "--map", THREE_GENERATOR, "--n", "3", "--certified", "2"]), Some(2));
    assert_eq!(code(&["nielsen", "--map", TWO_GENERATOR, "--power", "5", "--length-cap", "100"]), Some(3));
    assert_eq!(code(&["dynamics", "--map", TWO_GENERATOR, "--n-max", "5", "--length-cap", "500"]), Some(3));
    assert_eq!(code(&["periodic", "--map", THREE_GENERATOR, "--n", "3", "--list", "--budget", "10"]), Some(3));
    assert_eq!(code(&["density", "--predicate", "remnant", "--m", "2", "--p", "3", "--samples", "0", "--exact", "--budget", "10"]), Some(3));
    assert_eq!(code(&["nielsen", "--map", "a->ab"]), Some(1));
    assert_eq!(code(&["nielsen", "--map", "a->aA b; b->b"]), Some(1));
    assert_eq!(code(&["density", "--predicate", "remnant", "--m", "2", "--p", "3"]), Some(1));
    assert_eq!(code(&["frobnicate"]), Some(1));
    assert_eq!(code(&["--help"]), Some(0));
}

#[test]
fn errors_name_their_module() {
    let out = nielsen(&["nielsen", "--map", "a->1"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("wagner:"));
    let out = nielsen(&["nielsen", "--map", "a->a%"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parse:") && err.contains("position 4"), "{err}");
}

#[test]
fn auto_reduce_warns() {
    let out = nielsen(&["remnant", "--map", "a->aA b; b->b", "--auto-reduce"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert!(stdout(&out).contains("a          b"));
}

#[test]
fn density_is_independent_of_threads() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let file = dir.path().join(format!("t{threads}.csv"));
        let out = nielsen(&[
            "density", "--predicate", "Sl=1", "--m", "2", "--p", "4,8,16", "--samples", "3000", "--seed", "42",
            "--csv", file.to_str().unwrap(), "--threads", threads,
        ]);
        assert!(out.status.success());
        outputs.push((stdout(&out), std::fs::read_to_string(&file).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let csv = &outputs[0].1;
    assert!(csv.starts_with("m,p,predicate,samples,hits,estimate,ci_lo,ci_hi,seed\n"));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn threads_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_nielsen"))
        .args(["density", "--predicate", "remnant", "--m", "2", "--p", "3", "--samples", "100", "--seed", "1"])
        .env("NIELSEN_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
