//! Argument handling and dispatch.

use std::ffi::OsString;
use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};

use steenrod_core::verify::Suite;
use steenrod_core::{ActionKind, Grading, Prime};

use crate::commands::{self, CliError, CliResult, Outcome, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "steenrod", version, about = "Exact computations with the mod-p Steenrod algebra and nilHecke algebras")]
pub struct Cli {
    /// The prime p.
    #[arg(short = 'p', long = "prime", env = "STEENROD_PRIME", default_value_t = 2, global = true)]
    pub prime: u32,
    /// Number of polynomial variables; inferred from the input when omitted.
    #[arg(long = "n", global = true)]
    pub num_vars: Option<usize>,
    /// Degree bound for operator identities and verification sweeps.
    #[arg(short = 'D', long = "degree-bound", default_value_t = 24, global = true)]
    pub degree_bound: u32,
    #[arg(long, value_enum, default_value_t = GradingArg::Topological, global = true)]
    pub grading: GradingArg,
    #[arg(long, value_enum, default_value_t = ActionArg::Standard, global = true)]
    pub action: ActionArg,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0x5eed, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GradingArg {
    Topological,
    Compressed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ActionArg {
    Standard,
    Nonstandard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Nilhecke,
    SteenrodAxioms,
    Adem,
    Theorems,
    Pdg,
    MargolisHomology,
    Grothendieck,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Nilhecke => Suite::NilHecke,
            SuiteArg::SteenrodAxioms => Suite::SteenrodAxioms,
            SuiteArg::Adem => Suite::Adem,
            SuiteArg::Theorems => Suite::Theorems,
            SuiteArg::Pdg => Suite::Pdg,
            SuiteArg::MargolisHomology => Suite::MargolisHomology,
            SuiteArg::Grothendieck => Suite::Grothendieck,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rewrite a Steenrod expression into admissible form.
    Adem {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Apply a Steenrod expression to a polynomial: `act <op> on <poly>`.
    Act {
        #[arg(allow_hyphen_values = true)]
        op: String,
        #[arg(value_parser = ["on"], hide = true)]
        on: String,
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// nilHecke algebra operations.
    Nh {
        #[command(subcommand)]
        command: NhCommand,
    },
    /// Schubert polynomial of a permutation in one-line notation.
    Schubert {
        #[arg(long)]
        perm: String,
    },
    /// The Margolis differential d_t, alone or applied to an input.
    Margolis {
        #[arg(long)]
        t: u32,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "op")]
        on: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        op: Option<String>,
    },
    /// p-DG structures on nilHecke algebras.
    Pdg {
        #[command(subcommand)]
        command: PdgCommand,
    },
    /// Graded dimension and K_0 relation of a finite sub-Hopf algebra.
    Groth {
        /// Exponents r_1,...,r_N of the profile.
        #[arg(long, allow_hyphen_values = true)]
        profile: String,
        #[arg(long)]
        compressed: bool,
    },
    /// Run the verification suites.
    VerifyAll {
        /// Run over p in {2,3,5} and n in {2,3,4}.
        #[arg(long)]
        matrix: bool,
        #[arg(long = "suite", value_enum)]
        suites: Vec<SuiteArg>,
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum NhCommand {
    /// `nh apply <op> to <poly>`.
    Apply {
        #[arg(allow_hyphen_values = true)]
        op: String,
        #[arg(value_parser = ["to"], hide = true)]
        to: String,
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Rewrite into the basis x^a D_w.
    Normalize {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum PdgCommand {
    /// Check Leibniz, p-nilpotency and the defining relations.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<i64>,
        #[arg(long, default_value_t = 40)]
        samples: usize,
    },
    /// Slash homology ker d^s / im d^{p-s} of a truncation.
    Homology {
        #[arg(long)]
        truncate: i64,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<i64>,
        /// Truncate NH_n rather than P_n.
        #[arg(long)]
        nilhecke: bool,
    },
}

/// Reads `-` from stdin, at most once.
struct Inputs {
    stdin: Option<String>,
}

impl Inputs {
    fn get(&mut self, arg: &str) -> CliResult<String> {
        if arg != "-" {
            return Ok(arg.to_string());
        }
        if self.stdin.is_some() {
            return Err(CliError::Usage("stdin can supply only one expression".into()));
        }
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
        let s = s.trim().to_string();
        self.stdin = Some(s.clone());
        Ok(s)
    }
}

fn dispatch(cli: &Cli) -> CliResult<Outcome> {
    let prime = Prime::new(cli.prime)?;
    let cfg = RunConfig {
        prime,
        num_vars: cli.num_vars,
        degree_bound: cli.degree_bound,
        grading: match cli.grading {
            GradingArg::Topological => Grading::Topological,
            GradingArg::Compressed => Grading::Compressed,
        },
        action: match cli.action {
            ActionArg::Standard => ActionKind::Standard,
            ActionArg::Nonstandard => ActionKind::Nonstandard,
        },
        seed: cli.seed,
    };
    if cli.num_vars == Some(0) {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    let mut inputs = Inputs { stdin: None };
    match &cli.command {
        Command::Adem { expr } => commands::adem(&cfg, &inputs.get(expr)?),
        Command::Act { op, poly, .. } => {
            let op = inputs.get(op)?;
            commands::act_on(&cfg, &op, &inputs.get(poly)?)
        }
        Command::Nh { command: NhCommand::Apply { op, poly, .. } } => {
            let op = inputs.get(op)?;
            commands::nh_apply(&cfg, &op, &inputs.get(poly)?)
        }
        Command::Nh { command: NhCommand::Normalize { expr } } => commands::nh_normalize(&cfg, &inputs.get(expr)?),
        Command::Schubert { perm } => commands::schubert_polynomial(&cfg, perm),
        Command::Margolis { t, on, op } => {
            let on = on.as_deref().map(|s| inputs.get(s)).transpose()?;
            let op = op.as_deref().map(|s| inputs.get(s)).transpose()?;
            commands::margolis(&cfg, *t, on.as_deref(), op.as_deref())
        }
        Command::Pdg { command: PdgCommand::Verify { twist, samples } } => commands::pdg_verify(&cfg, *twist, *samples),
        Command::Pdg { command: PdgCommand::Homology { truncate, s, twist, nilhecke } } => {
            commands::pdg_homology(&cfg, *truncate, *s, *twist, *nilhecke)
        }
        Command::Groth { profile, compressed } => commands::groth(&cfg, profile, *compressed),
        Command::VerifyAll { matrix, suites, samples } => {
            let suites: Vec<Suite> = suites.iter().map(|&s| s.into()).collect();
            commands::verify_all(&cfg, *matrix, &suites, *samples)
        }
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => println!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("values serialize")),
            }
            if out.failed {
                4
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
