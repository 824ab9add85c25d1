use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_steenrod");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("STEENROD_PRIME").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .env_remove("STEENROD_PRIME")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn documented_examples_are_byte_exact() {
    assert_eq!(stdout(&run(&["adem", "P(1)*P(1)", "-p", "3"])), "2*P(2)\n");
    assert_eq!(stdout(&run(&["schubert", "--n", "3", "--perm", "1,2,3"])), "1\n");
    assert_eq!(stdout(&run(&["groth", "--profile", "1", "-p", "2"])), "relation: 1+q^2\nfactors: [Phi_4]\n");
}

#[test]
fn subcommand_outputs() {
    assert_eq!(stdout(&run(&["schubert", "--perm", "3,2,1"])), "x1^2*x2\n");
    assert_eq!(stdout(&run(&["groth", "--profile", "1", "-p", "3"])), "relation: 1+q^4+q^8\nfactors: [Phi_3, Phi_6, Phi_12]\n");
    assert_eq!(stdout(&run(&["act", "P(1)", "on", "x1", "-p", "5"])), "x1^5\n");
    assert_eq!(stdout(&run(&["act", "P(1)", "on", "x1", "-p", "5", "--action", "nonstandard"])), "4*x1^2\n");
    assert_eq!(stdout(&run(&["nh", "apply", "D1", "to", "x1^2"])), "x1 + x2\n");
    assert_eq!(stdout(&run(&["nh", "normalize", "D1*x1 - x2*D1", "-p", "3"])), "1\n");
    assert_eq!(stdout(&run(&["nh", "normalize", "D1*D1"])), "0\n");
    assert_eq!(stdout(&run(&["margolis", "--t", "2", "-p", "3", "--on", "x1"])), "x1^9\n");
    assert_eq!(stdout(&run(&["pdg", "homology", "--truncate", "6", "--n", "1"])), "0: 1\n6: 1\n");
    assert!(stdout(&run(&["pdg", "verify", "-p", "3", "--n", "3", "--twist", "2"])).contains("relations: ok"));
}

#[test]
fn prime_comes_from_the_environment() {
    let out = Command::new(BIN).args(["adem", "P(1)*P(1)"]).env("STEENROD_PRIME", "3").output().unwrap();
    assert_eq!(stdout(&out), "2*P(2)\n");
    let out = Command::new(BIN).args(["adem", "P(1)*P(1)", "-p", "2"]).env("STEENROD_PRIME", "3").output().unwrap();
    assert_eq!(stdout(&out), "0\n");
}

#[test]
fn dash_reads_stdin() {
    let out = run_with_stdin(&["adem", "-", "-p", "3"], "P(1) * P(1)\n");
    assert_eq!(stdout(&out), "2*P(2)\n");
    let out = run_with_stdin(&["nh", "apply", "D1", "to", "-"], "x1^2");
    assert_eq!(stdout(&out), "x1 + x2\n");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["adem", "P(1)"]).status.code(), Some(0));
    assert_eq!(run(&["--frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["act", "P(1)", "onto", "x1"]).status.code(), Some(1));
    assert_eq!(run(&["adem", "P(1)*"]).status.code(), Some(2));
    assert_eq!(run(&["adem", "x1"]).status.code(), Some(2));
    assert_eq!(run(&["schubert", "--perm", "1,x"]).status.code(), Some(2));
    assert_eq!(run(&["schubert", "--perm", "2,2"]).status.code(), Some(2));
    assert_eq!(run(&["adem", "P(1)", "-p", "6"]).status.code(), Some(3));
    assert_eq!(run(&["act", "P(1)", "on", "x3", "--n", "2"]).status.code(), Some(3));
    assert_eq!(run(&["schubert", "--perm", "1,2", "--n", "3"]).status.code(), Some(3));
    assert_eq!(run(&["groth", "--profile", "2,0"]).status.code(), Some(3));
    assert_eq!(run(&["pdg", "homology", "--truncate", "4", "-p", "3", "--s", "3"]).status.code(), Some(3));
    assert_eq!(run(&["help"]).status.code(), Some(0));
}

#[test]
fn parse_errors_report_columns() {
    let out = run(&["nh", "normalize", "D1 + P(2)"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("column 6"), "{err}");
}

#[test]
fn json_output_matches_the_schema() {
    let schema: Value = serde_json::from_str(include_str!("../schema/output.schema.json")).unwrap();
    let validator = jsonschema::JSONSchema::compile(&schema).unwrap();
    let cases: &[&[&str]] = &[
        &["adem", "P(3)*P(1) + P(1)*P(3)", "-p", "3"],
        &["act", "P(2)", "on", "x1*x2^2", "-p", "3"],
        &["nh", "apply", "D1*D2", "to", "x1^2*x2"],
        &["nh", "normalize", "D2*x1*D1", "-p", "5"],
        &["schubert", "--perm", "2,3,1"],
        &["margolis", "--t", "1"],
        &["margolis", "--t", "1", "--on", "x1^3"],
        &["margolis", "--t", "1", "--op", "D1", "--n", "2", "-D", "12"],
        &["pdg", "verify", "--n", "2"],
        &["pdg", "homology", "--truncate", "8", "-p", "3", "--n", "2"],
        &["pdg", "homology", "--truncate", "4", "--n", "2", "--nilhecke"],
        &["groth", "--profile", "2,1", "-p", "3", "--compressed"],
        &["verify-all", "--suite", "grothendieck", "--suite", "adem", "--samples", "20"],
    ];
    for args in cases {
        let mut args = args.to_vec();
        args.extend(["--format", "json"]);
        let out = run(&args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let value: Value = serde_json::from_slice(&out.stdout).unwrap();
        let msgs: Vec<String> = match validator.validate(&value) {
            Ok(()) => Vec::new(),
            Err(errors) => errors.map(|e| e.to_string()).collect(),
        };
        assert!(msgs.is_empty(), "{args:?} violates the schema: {msgs:?}");
    }
    assert!(!validator.is_valid(&serde_json::json!({ "command": "adem" })));
}
