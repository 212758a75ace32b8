use std::path::PathBuf;
use std::process::{Command, Output};

use epipelagic::cli::{load, InputDoc};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_epipelagic"));
    c.env_remove("EPIPELAGIC_VERBOSE");
    c
}

fn write_input(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("epipelagic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

const SP4: &str = r#"{"group":{"family":"sp","n":4,"p":7},
 "stratum":{"components":[{"degree":2,"unit":3},{"degree":2,"unit":"zeta^2"}],"omega_signs":[1,-1]}}"#;

#[test]
fn lift_is_deterministic_and_echoes_input() {
    let input = write_input("sp4.json", SP4);
    let a = run(&["lift", "--input", input.to_str().unwrap()]);
    let b = run(&["lift", "--input", input.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let echo = serde_json::to_string(&v["input"]).unwrap();
    assert_eq!(load(&echo).unwrap(), load(SP4).unwrap());
    assert_eq!(v["total_rank"], 5);
}

#[test]
fn lift_to_file() {
    let input = write_input("sp4b.json", SP4);
    let out = input.with_file_name("sp4b.out.json");
    let o = run(&["lift", "--input", input.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v["entries"].is_array());
}

#[test]
fn schema_errors_exit_2() {
    for (name, text) in [
        ("garbage.json", "{not json"),
        ("unknown.json", r#"{"group":{"family":"so_odd","n":3,"p":5,"extra":1},"stratum":{"components":[]}}"#),
        ("family.json", r#"{"group":{"family":"so_odder","n":3,"p":5},"stratum":{"components":[]}}"#),
        ("field.json", r#"{"group":{"family":"so_odd","n":3,"p":9},"stratum":{"components":[]}}"#),
        (
            "unit.json",
            r#"{"group":{"family":"so_odd","n":3,"p":5},"stratum":{"components":[{"degree":2,"unit":"x^2"}]}}"#,
        ),
    ] {
        let input = write_input(name, text);
        let o = run(&["lift", "--input", input.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn stratum_violation_exits_3_with_clause() {
    let text = r#"{"group":{"family":"sp","n":4,"p":7},
     "stratum":{"components":[{"degree":2,"unit":3},{"degree":2,"unit":3}],"omega_signs":[1,1]}}"#;
    let input = write_input("bad.json", text);
    let o = run(&["lift", "--input", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains('('), "{err}");
}

#[test]
fn packet_command() {
    let input = write_input("pk.json", SP4);
    let o = run(&["packet", "--input", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["cardinality"], 4);
    let t = run(&["packet", "--input", input.to_str().unwrap(), "--format", "table"]);
    assert!(String::from_utf8_lossy(&t.stdout).contains("4 members"));
}

#[test]
fn lift_table_uses_tuple_notation() {
    let input = write_input("tbl.json", SP4);
    let o = run(&["lift", "--input", input.to_str().unwrap(), "--format", "table"]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("pi~("), "{text}");
}

#[test]
fn gauss_and_verify() {
    let o = run(&["gauss", "--p", "5", "--form", "1,2,-1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["agree"], true);
    assert_eq!(run(&["gauss", "--p", "6", "--form", "1"]).status.code(), Some(2));

    let o = run(&["verify", "--suite", "gauss", "--p", "3,5,7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(run(&["verify", "--suite", "hecke", "--p", "11"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nope", "--p", "3"]).status.code(), Some(2));
}

#[test]
fn verbosity_only_touches_stderr() {
    let quiet = run(&["verify", "--suite", "quadform", "--p", "5"]);
    let loud = bin().args(["verify", "--suite", "quadform", "--p", "5"]).env("EPIPELAGIC_VERBOSE", "1").output().unwrap();
    assert_eq!(quiet.stdout, loud.stdout);
    assert!(quiet.stderr.is_empty());
    assert!(!loud.stderr.is_empty());
}

#[test]
fn echo_parses_as_input_doc() {
    let (g, s) = load(SP4).unwrap();
    let doc = InputDoc::echo(&g, &s);
    let back: InputDoc = serde_json::from_value(serde_json::to_value(&doc).unwrap()).unwrap();
    assert_eq!(back, doc);
}
