//! `symvec`: exact poset-measure and intersecting-family computations from the command line.
//!
//! Machine output is JSON on stdout (or `--report`); human-readable summaries go to stderr.
//! Exit codes: 0 all requested checks passed, 1 validation failure, 2 degenerate
//! construction, 3 budget exhausted.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "symvec",
    version,
    about = "Covering-poset measures and symmetric intersecting families"
)]
struct Cli {
    /// Cap on enumerated points / subsets.
    #[arg(long, global = true, env = "SYMVEC_BUDGET", default_value_t = symvec::DEFAULT_BUDGET)]
    budget: u64,

    /// Write the JSON report here (plus a `.manifest.json` beside it) instead of stdout.
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Domination strength of mu1 over mu0 (covering poset W_k, or files).
    Domination(DominationArgs),
    /// Enumerate the up-sets of a poset.
    Upsets(PosetArgs),
    /// Build a family and write it as a family file.
    Construct(ConstructArgs),
    /// Check properties of a family file.
    Check(CheckArgs),
    /// Exact maximum intersecting family invariant under a coordinate group.
    Search(SearchArgs),
    /// Slice influences of a cover-space family at time t.
    Influence(FamilyAtArgs),
    /// mu_t^n of a cover-space family.
    Measure(MeasureArgs),
    /// Compare the exact derivative along mu_t with central differences.
    RussoCheck(RussoArgs),
    /// closure -> half measure -> bound, on a symmetric intersecting base family.
    BoundChain(BoundChainArgs),
}

#[derive(Debug, Args, Serialize)]
struct PosetArgs {
    /// Use the covering poset W_k.
    #[arg(long, conflicts_with = "poset")]
    k: Option<usize>,
    /// Poset file.
    #[arg(long)]
    poset: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct DominationArgs {
    #[command(flatten)]
    poset: PosetArgs,
    /// Measure file for mu0 (with --poset).
    #[arg(long, requires = "poset")]
    mu0: Option<PathBuf>,
    /// Measure file for mu1 (with --poset).
    #[arg(long, requires = "poset")]
    mu1: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FamilyType {
    Dictator,
    Majority,
    Fano,
    Singer,
    SetIntersecting,
}

#[derive(Debug, Args, Serialize)]
struct ConstructArgs {
    #[arg(long = "type", value_enum)]
    kind: FamilyType,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long)]
    n: Option<usize>,
    /// Projective plane order for `singer` (2, 3 or 4).
    #[arg(long)]
    q: Option<usize>,
    /// Symbol fixed by the construction.
    #[arg(long, default_value_t = 1)]
    symbol: usize,
    /// Fixed coordinate for `dictator`.
    #[arg(long, default_value_t = 1)]
    coordinate: usize,
    /// Block file for `set-intersecting`.
    #[arg(long)]
    blocks: Option<PathBuf>,
    /// Write the up-closure in W_k^n instead of the base family.
    #[arg(long)]
    closure: bool,
    /// Family file to write.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct CheckArgs {
    #[arg(long)]
    family: PathBuf,
    #[arg(long)]
    intersecting: bool,
    /// Generator (space-separated images); repeat for several. Checks invariance and transitivity.
    #[arg(long = "symmetric")]
    symmetric: Vec<String>,
    /// Up-set of the product order.
    #[arg(long)]
    up_set: bool,
    /// mu_{1/2}^n at most 1/2 (cover families; base families are embedded and closed).
    #[arg(long)]
    half_measure: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum GroupKind {
    Cyclic,
    Symmetric,
    Swap,
}

#[derive(Debug, Args, Serialize)]
struct SearchArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = GroupKind::Cyclic)]
    group: GroupKind,
    /// Explicit generator (space-separated images); overrides --group. Repeatable.
    #[arg(long)]
    generator: Vec<String>,
    /// Use the exhaustive oracle instead of branch and bound.
    #[arg(long)]
    brute_force: bool,
    /// Write the witness family here.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct FamilyAtArgs {
    #[arg(long)]
    family: PathBuf,
    #[arg(long, default_value = "1/2")]
    t: String,
}

#[derive(Debug, Args, Serialize)]
struct MeasureArgs {
    #[command(flatten)]
    at: FamilyAtArgs,
    /// Estimate by sampling instead of exact summation.
    #[arg(long, requires = "seed")]
    monte_carlo: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
struct RussoArgs {
    #[command(flatten)]
    at: FamilyAtArgs,
    #[arg(long, default_value = "1e-5")]
    h: String,
    /// Relative tolerance for the finite-difference comparison.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Accept families that are not up-sets.
    #[arg(long)]
    allow_non_up_set: bool,
}

#[derive(Debug, Args, Serialize)]
struct BoundChainArgs {
    #[arg(long)]
    family: PathBuf,
    /// Generator of the symmetry group; defaults to the full n-cycle. Repeatable.
    #[arg(long)]
    generator: Vec<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(outcome) => {
            if let Err(e) = commands::emit(&cli, &outcome) {
                eprintln!("error: {e}");
                return ExitCode::from(e.exit_code() as u8);
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
