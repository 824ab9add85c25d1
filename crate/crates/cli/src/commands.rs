//! Subcommand implementations. Each returns an [`Outcome`] holding both
//! renderings; the caller picks one.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use steenrod_core::groth::{graded_dimension, k0_presentation, SubHopfProfile};
use steenrod_core::nilhecke::schubert;
use steenrod_core::pdg::{khovanov_qi_derivation, margolis_homology, twisted_derivation, verify_pdg, Derivation, GradedOperator};
use steenrod_core::steenrod::{act, adem_normalize, margolis_bar, margolis_d};
use steenrod_core::verify::{Suite, VerifyConfig};
use steenrod_core::{ActionKind, ActionSpec, Error, Grading, Permutation, PolyOperator, Prime};

use crate::expr::{eval_nilhecke, eval_polynomial, eval_steenrod, parse, ParseError, Target};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Malformed(String),
    #[error("{0}")]
    Domain(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) | CliError::Malformed(_) => 2,
            CliError::Domain(_) => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub text: String,
    pub json: Value,
    /// Set when a verification ran and found counterexamples.
    pub failed: bool,
}

impl Outcome {
    fn ok(text: impl Into<String>, json: Value) -> Self {
        Outcome { text: text.into(), json, failed: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub prime: Prime,
    pub num_vars: Option<usize>,
    pub degree_bound: u32,
    pub grading: Grading,
    pub action: ActionKind,
    pub seed: u64,
}

impl RunConfig {
    fn spec(&self) -> ActionSpec {
        ActionSpec { kind: self.action, prime: self.prime }
    }

    /// The configured variable count, or the smallest one fitting `exprs`.
    fn vars_for(&self, arity: usize) -> usize {
        self.num_vars.unwrap_or(arity.max(1))
    }
}

fn grading_name(g: Grading) -> &'static str {
    match g {
        Grading::Topological => "topological",
        Grading::Compressed => "compressed",
    }
}

fn action_name(a: ActionKind) -> &'static str {
    match a {
        ActionKind::Standard => "standard",
        ActionKind::Nonstandard => "nonstandard",
    }
}

pub fn adem(cfg: &RunConfig, source: &str) -> CliResult<Outcome> {
    let e = eval_steenrod(&parse(source, Target::Steenrod)?, cfg.prime, cfg.grading)?;
    let normal = adem_normalize(&e);
    let terms: Vec<Value> = normal
        .terms()
        .map(|(w, c)| json!({ "word": w.exponents(), "coefficient": c.value() }))
        .collect();
    Ok(Outcome::ok(
        normal.to_string(),
        json!({
            "command": "adem",
            "prime": cfg.prime.get(),
            "input": source,
            "result": normal.to_string(),
            "terms": terms,
            "homogeneous": normal.is_homogeneous(),
        }),
    ))
}

pub fn act_on(cfg: &RunConfig, op: &str, poly: &str) -> CliResult<Outcome> {
    let e = eval_steenrod(&parse(op, Target::Steenrod)?, cfg.prime, cfg.grading)?;
    let f_expr = parse(poly, Target::Polynomial)?;
    let n = cfg.vars_for(f_expr.arity());
    let f = eval_polynomial(&f_expr, cfg.prime, n)?;
    let result = act(&e, &f, &cfg.spec())?;
    Ok(Outcome::ok(
        result.to_string(),
        json!({
            "command": "act",
            "prime": cfg.prime.get(),
            "num_vars": n,
            "action": action_name(cfg.action),
            "grading": grading_name(cfg.grading),
            "result": result.to_string(),
        }),
    ))
}

pub fn nh_apply(cfg: &RunConfig, op: &str, poly: &str) -> CliResult<Outcome> {
    let op_expr = parse(op, Target::NilHecke)?;
    let f_expr = parse(poly, Target::Polynomial)?;
    let n = cfg.vars_for(op_expr.arity().max(f_expr.arity()));
    let e = eval_nilhecke(&op_expr, cfg.prime, n)?;
    let result = e.apply_to(&eval_polynomial(&f_expr, cfg.prime, n)?)?;
    Ok(Outcome::ok(
        result.to_string(),
        json!({ "command": "nh-apply", "prime": cfg.prime.get(), "num_vars": n, "result": result.to_string() }),
    ))
}

pub fn nh_normalize(cfg: &RunConfig, source: &str) -> CliResult<Outcome> {
    let expr = parse(source, Target::NilHecke)?;
    let n = cfg.vars_for(expr.arity());
    let e = eval_nilhecke(&expr, cfg.prime, n)?;
    let terms: Vec<Value> = e
        .normal_form()
        .into_iter()
        .map(|((m, w), c)| json!({ "monomial": m.exponents(), "permutation": w.images(), "coefficient": c.value() }))
        .collect();
    Ok(Outcome::ok(
        e.to_string(),
        json!({
            "command": "nh-normalize",
            "prime": cfg.prime.get(),
            "num_vars": n,
            "result": e.to_string(),
            "terms": terms,
        }),
    ))
}

pub fn parse_permutation(source: &str) -> CliResult<Vec<usize>> {
    source
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Malformed(format!("malformed permutation '{source}': '{}' is not a positive integer", s.trim())))
        })
        .collect()
}

pub fn schubert_polynomial(cfg: &RunConfig, perm: &str) -> CliResult<Outcome> {
    let images = parse_permutation(perm)?;
    let n = cfg.num_vars.unwrap_or(images.len());
    if images.len() != n {
        return Err(CliError::Domain(Error::Domain(format!(
            "permutation has {} entries but n = {n}",
            images.len()
        ))));
    }
    let w = Permutation::from_images(images.clone())
        .map_err(|e| CliError::Malformed(format!("malformed permutation '{perm}': {e}")))?;
    let s = schubert(&w, cfg.prime);
    Ok(Outcome::ok(
        s.to_string(),
        json!({
            "command": "schubert",
            "prime": cfg.prime.get(),
            "num_vars": n,
            "permutation": images,
            "result": s.to_string(),
        }),
    ))
}

pub fn margolis(cfg: &RunConfig, t: u32, on: Option<&str>, op: Option<&str>) -> CliResult<Outcome> {
    let d = margolis_d(t, cfg.prime)?;
    let (target, result) = match (on, op) {
        (Some(src), None) => {
            let expr = parse(src, Target::Polynomial)?;
            let n = cfg.vars_for(expr.arity());
            ("polynomial", act(&d, &eval_polynomial(&expr, cfg.prime, n)?, &cfg.spec())?.to_string())
        }
        (None, Some(src)) => {
            let expr = parse(src, Target::NilHecke)?;
            let n = cfg.vars_for(expr.arity());
            let e = eval_nilhecke(&expr, cfg.prime, n)?;
            ("nilhecke", margolis_bar(t, &e, cfg.spec(), cfg.degree_bound)?.to_string())
        }
        (None, None) => ("operator", d.to_string()),
        (Some(_), Some(_)) => return Err(CliError::Usage("--on and --op are mutually exclusive".into())),
    };
    Ok(Outcome::ok(
        result.clone(),
        json!({ "command": "margolis", "prime": cfg.prime.get(), "t": t, "target": target, "result": result }),
    ))
}

fn derivation(cfg: &RunConfig, twist: Option<i64>) -> (usize, Derivation) {
    let n = cfg.num_vars.unwrap_or(2);
    let d = match twist {
        Some(a) => twisted_derivation(cfg.prime, n, a),
        None => khovanov_qi_derivation(cfg.prime, n),
    };
    (n, d)
}

pub fn pdg_verify(cfg: &RunConfig, twist: Option<i64>, samples: usize) -> CliResult<Outcome> {
    let (n, d) = derivation(cfg, twist);
    let report = verify_pdg(&d, cfg.degree_bound, cfg.seed, samples);
    let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
    let mut text = format!(
        "derivation: {}\nleibniz: {}\np-nilpotent: {}\nrelations: {}",
        d.name(),
        mark(report.leibniz_ok),
        mark(report.p_nilpotent_ok),
        mark(report.relations_ok)
    );
    for f in &report.failures {
        text.push_str(&format!("\n  {f}"));
    }
    Ok(Outcome {
        text,
        json: json!({
            "command": "pdg-verify",
            "prime": cfg.prime.get(),
            "num_vars": n,
            "derivation": d.name(),
            "leibniz_ok": report.leibniz_ok,
            "p_nilpotent_ok": report.p_nilpotent_ok,
            "relations_ok": report.relations_ok,
            "failures": report.failures,
        }),
        failed: !report.all_ok(),
    })
}

pub fn pdg_homology(cfg: &RunConfig, truncate: i64, s: Option<u32>, twist: Option<i64>, nilhecke: bool) -> CliResult<Outcome> {
    let (n, d) = derivation(cfg, twist);
    let p = cfg.prime.get();
    let s = s.unwrap_or(p - 1);
    if s == 0 || s >= p {
        return Err(CliError::Domain(Error::Domain(format!("--s must lie in 1..{}", p - 1))));
    }
    if truncate < 0 {
        return Err(CliError::Domain(Error::Domain("--truncate must be non-negative".into())));
    }
    let op = if nilhecke {
        GradedOperator::nilhecke_truncation(&d, truncate)
    } else {
        GradedOperator::polynomial_truncation(&d, truncate as u32)
    };
    let report = margolis_homology(&op, s)?;
    let text = if report.dims.is_empty() {
        "0".to_string()
    } else {
        report.dims.iter().map(|(k, v)| format!("{k}: {v}")).collect::<Vec<_>>().join("\n")
    };
    let dims: BTreeMap<String, usize> = report.dims.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    Ok(Outcome::ok(
        text,
        json!({
            "command": "pdg-homology",
            "prime": p,
            "num_vars": n,
            "algebra": if nilhecke { "nilhecke" } else { "polynomial" },
            "derivation": d.name(),
            "truncate": truncate,
            "s": s,
            "dims": dims,
            "boundary": report.boundary,
        }),
    ))
}

pub fn groth(cfg: &RunConfig, profile: &str, compressed: bool) -> CliResult<Outcome> {
    let exponents = if profile.trim().is_empty() {
        Vec::new()
    } else {
        profile
            .split(',')
            .map(|s| s.trim().parse::<u32>().map_err(|_| CliError::Malformed(format!("malformed profile '{profile}'"))))
            .collect::<CliResult<Vec<u32>>>()?
    };
    let grading = if compressed { Grading::Compressed } else { cfg.grading };
    let profile = SubHopfProfile::new(cfg.prime, exponents.clone(), grading)?;
    let dim = graded_dimension(&profile)?;
    let k0 = k0_presentation(&profile)?;
    let factors: Vec<String> = k0.cyclotomic_factors.iter().map(|d| format!("Phi_{d}")).collect();
    let text = format!("relation: {}\nfactors: [{}]", k0.relation, factors.join(", "));
    let coeffs: Vec<String> = dim.dense_coeffs().iter().map(|c| c.to_string()).collect();
    let coeffs: Vec<Value> = coeffs
        .iter()
        .map(|c| c.parse::<i64>().map(Value::from).unwrap_or_else(|_| Value::from(c.clone())))
        .collect();
    Ok(Outcome::ok(
        text,
        json!({
            "command": "groth",
            "prime": cfg.prime.get(),
            "grading": grading_name(grading),
            "profile": exponents,
            "dim_q": coeffs,
            "factors": k0.cyclotomic_factors,
            "relation": k0.relation.to_string(),
        }),
    ))
}

pub const MATRIX_PRIMES: [u32; 3] = [2, 3, 5];
pub const MATRIX_VARS: [usize; 3] = [2, 3, 4];

pub fn verify_all(cfg: &RunConfig, matrix: bool, suites: &[Suite], samples: Option<usize>) -> CliResult<Outcome> {
    let suites: Vec<Suite> = if suites.is_empty() { Suite::ALL.to_vec() } else { suites.to_vec() };
    let configs: Vec<VerifyConfig> = if matrix {
        MATRIX_PRIMES
            .iter()
            .flat_map(|&p| MATRIX_VARS.iter().map(move |&n| (p, n)))
            .map(|(p, n)| VerifyConfig::new(Prime::new(p).expect("matrix primes are prime"), n))
            .collect()
    } else {
        vec![VerifyConfig::new(cfg.prime, cfg.num_vars.unwrap_or(3))]
    };
    let configs: Vec<VerifyConfig> = configs
        .into_iter()
        .map(|c| VerifyConfig {
            degree_bound: cfg.degree_bound,
            seed: cfg.seed,
            samples: samples.unwrap_or(c.samples),
            ..c
        })
        .collect();
    let first_vars = configs.iter().map(|c| c.num_vars).min().unwrap_or(0);
    let jobs: Vec<(VerifyConfig, Suite)> = configs
        .iter()
        .flat_map(|c| suites.iter().map(move |&s| (*c, s)))
        .filter(|(c, s)| s.uses_num_vars() || c.num_vars == first_vars)
        .collect();
    let results: Vec<_> = jobs.par_iter().map(|(c, s)| (*c, *s, s.run(c))).collect();

    let mut lines = Vec::new();
    let mut runs = Vec::new();
    let (mut total, mut failed) = (0, 0);
    for (c, suite, reports) in &results {
        let scope = if suite.uses_num_vars() { format!("p={} n={}", c.prime, c.num_vars) } else { format!("p={}", c.prime) };
        for r in reports {
            total += 1;
            if !r.passed {
                failed += 1;
            }
            lines.push(format!("{} {scope} {}: {} ({} cases)", if r.passed { "ok  " } else { "FAIL" }, suite.name(), r.name, r.cases));
            for f in &r.failures {
                lines.push(format!("       {f}"));
            }
        }
        runs.push(json!({
            "prime": c.prime.get(),
            "num_vars": c.num_vars,
            "degree_bound": c.degree_bound,
            "seed": c.seed,
            "suite": suite.name(),
            "checks": reports,
        }));
    }
    lines.push(format!("{total} checks, {failed} failed"));
    Ok(Outcome {
        text: lines.join("\n"),
        json: json!({ "command": "verify-all", "passed": failed == 0, "checks": total, "failed": failed, "runs": runs }),
        failed: failed > 0,
    })
}
