//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria 1-7 come from `verify-all --matrix` (p in {2,3,5}, n in {2,3,4},
//! D = 24); criterion 8 exercises the parser and the binary directly.

use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use steenrod_cli::corpus::random_expr;
use steenrod_cli::expr::{parse, render, Target};

const BIN: &str = env!("CARGO_BIN_EXE_steenrod");

fn steenrod(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("STEENROD_PRIME").output().expect("binary runs")
}

struct Verdict {
    passed: bool,
    detail: String,
}

fn suite_verdict(runs: &[Value], suite: &str) -> Verdict {
    let mut checks = 0;
    let mut failures = Vec::new();
    for run in runs.iter().filter(|r| r["suite"] == suite) {
        for c in run["checks"].as_array().into_iter().flatten() {
            checks += 1;
            if c["passed"] != Value::Bool(true) {
                failures.push(format!("p={} n={}: {} {}", run["prime"], run["num_vars"], c["name"], c["failures"]));
            }
        }
    }
    let passed = checks > 0 && failures.is_empty();
    let detail = if passed {
        format!("{checks} checks")
    } else if checks == 0 {
        "no checks ran".to_string()
    } else {
        format!("{} of {checks} checks failed; first: {}", failures.len(), failures[0])
    };
    Verdict { passed, detail }
}

fn round_trip(target: Target, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..1000 {
        let e = random_expr(&mut rng, target, 3);
        let text = render(&e);
        let back = parse(&text, target).map_err(|err| format!("case {i}: '{text}' fails to parse: {err}"))?;
        if back != e {
            return Err(format!("case {i}: '{text}' parses to a different tree"));
        }
        let spaced = text.replace('*', " * ").replace('^', " ^ ");
        if parse(&spaced, target).ok().as_ref() != Some(&e) {
            return Err(format!("case {i}: whitespace changes the tree of '{text}'"));
        }
    }
    Ok(1000)
}

fn cli_verdict(matrix_exit: Option<i32>) -> Verdict {
    let mut problems = Vec::new();
    for (target, seed) in [(Target::Polynomial, 1), (Target::NilHecke, 2), (Target::Steenrod, 3)] {
        if let Err(e) = round_trip(target, seed) {
            problems.push(format!("{target} round-trip: {e}"));
        }
    }
    if matrix_exit != Some(0) {
        problems.push(format!("verify-all --matrix exited with {matrix_exit:?}"));
    }
    let examples: [(&[&str], &str); 3] = [
        (&["adem", "P(1)*P(1)", "-p", "3"], "2*P(2)\n"),
        (&["schubert", "--n", "3", "--perm", "1,2,3"], "1\n"),
        (&["groth", "--profile", "1", "-p", "2"], "relation: 1+q^2\nfactors: [Phi_4]\n"),
    ];
    for (args, expected) in examples {
        let out = steenrod(args);
        let stdout = String::from_utf8_lossy(&out.stdout);
        if !out.status.success() || stdout != expected {
            problems.push(format!("`steenrod {}` printed {stdout:?}", args.join(" ")));
        }
    }
    Verdict {
        passed: problems.is_empty(),
        detail: if problems.is_empty() {
            "3000 round-trips, verify-all exit 0, 3 examples byte-exact".to_string()
        } else {
            problems.join("; ")
        },
    }
}

fn main() {
    // `cargo test -- --list` and filters should not trigger the full run.
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    if let Some(filter) = args.iter().find(|a| !a.starts_with('-')) {
        if !"acceptance".contains(filter.as_str()) {
            return;
        }
    }

    let matrix = steenrod(&["verify-all", "--matrix", "--format", "json"]);
    let report: Value = serde_json::from_slice(&matrix.stdout).unwrap_or(Value::Null);
    let runs = report["runs"].as_array().cloned().unwrap_or_default();

    let criteria = [
        ("nilHecke relations", suite_verdict(&runs, "nilhecke")),
        ("Steenrod axioms", suite_verdict(&runs, "steenrod-axioms")),
        ("Adem rewriting", suite_verdict(&runs, "adem")),
        ("theorem identities", suite_verdict(&runs, "theorems")),
        ("p-DG structures", suite_verdict(&runs, "pdg")),
        ("Margolis homology oracle", suite_verdict(&runs, "margolis-homology")),
        ("Grothendieck groups", suite_verdict(&runs, "grothendieck")),
        ("command line", cli_verdict(matrix.status.code())),
    ];
    let mut all = true;
    for (i, (name, v)) in criteria.iter().enumerate() {
        all &= v.passed;
        println!("criterion {} {name}: {} ({})", i + 1, if v.passed { "PASS" } else { "FAIL" }, v.detail);
    }
    if !all {
        std::process::exit(1);
    }
}
