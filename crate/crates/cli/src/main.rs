//! `icc`: interval constrained coloring tools on the command line.
//!
//! Exit codes: 0 success / feasible / satisfiable, 10 infeasible /
//! unsatisfiable, 20 unknown (budget exhausted), 1 usage error, 2 input
//! format error, 3 internal invariant failure.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "icc", version, about = "Interval constrained 3-coloring: solving, 3-SAT reduction and gap audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reduce a 3-SAT formula to an interval constrained coloring instance.
    Reduce(ReduceArgs),
    /// Decide feasibility, enumerate feasible colorings, or maximize satisfied intervals.
    Solve(SolveArgs),
    /// Check a coloring against an instance.
    Verify {
        /// Instance file.
        instance: PathBuf,
        /// Coloring file.
        coloring: PathBuf,
    },
    /// Turn a satisfying assignment into a feasible coloring of a reduced instance.
    Encode {
        /// Reduction map written by `reduce`.
        #[arg(long)]
        map: PathBuf,
        /// Assignment file ("a <lits> 0").
        assignment: PathBuf,
        /// Output file (default stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Read a truth assignment off a coloring of a reduced instance.
    Extract {
        /// Reduction map written by `reduce`.
        #[arg(long)]
        map: PathBuf,
        /// Coloring file.
        coloring: PathBuf,
        /// Majority vote over non-broken clauses instead of strict agreement; needs --instance.
        #[arg(long, requires = "instance")]
        majority: bool,
        /// Reduced instance, for --majority.
        #[arg(long)]
        instance: Option<PathBuf>,
    },
    /// Recount broken and bad clauses and check the gap accounting inequality.
    Audit(AuditArgs),
    /// Build and certify an expander graph.
    Expander(ExpanderArgs),
    /// Generate random inputs.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Reduce, encode, verify and extract in one pass.
    Roundtrip(RoundtripArgs),
}

#[derive(Debug, Args)]
struct GapFlags {
    /// Gap mode: expander-linked variable intervals.
    #[arg(long)]
    gap: bool,
    /// Expander degree in gap mode (even).
    #[arg(long, default_value_t = 4)]
    degree: usize,
    /// Expansion each expander must reach in gap mode.
    #[arg(long, default_value_t = 1.0)]
    target_h: f64,
    /// Seed for expander sampling; required with --gap.
    #[arg(long)]
    seed: Option<u64>,
    /// Source gap as a rational, e.g. 1/8.
    #[arg(long, default_value = "1/8")]
    eps0: String,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    /// DIMACS CNF input with 3 literals per clause.
    input: PathBuf,
    /// Instance output file.
    #[arg(short, long)]
    output: PathBuf,
    /// Reduction map output file.
    #[arg(long)]
    map: PathBuf,
    #[command(flatten)]
    gap: GapFlags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Backtrack,
    Dpll,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Instance file.
    instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Backtrack)]
    method: Method,
    /// Search budget: nodes for backtracking, decisions for DPLL.
    #[arg(long)]
    budget: Option<u64>,
    /// Print up to this many feasible colorings (backtracking).
    #[arg(long, conflicts_with = "max_sat")]
    enumerate: Option<usize>,
    /// Print the largest number of simultaneously satisfiable intervals (n <= 15).
    #[arg(long)]
    max_sat: bool,
}

#[derive(Debug, Args)]
struct AuditArgs {
    /// Reduction map written by `reduce --gap`.
    #[arg(long)]
    map: PathBuf,
    /// Reduced instance.
    #[arg(long)]
    instance: PathBuf,
    /// Coloring to audit; without it, random colorings are audited.
    #[arg(long, conflicts_with = "trials")]
    coloring: Option<PathBuf>,
    /// Number of random colorings to audit.
    #[arg(long)]
    trials: Option<usize>,
    /// Seed of the first random coloring; trial k uses seed + k.
    #[arg(long, required_unless_present = "coloring")]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct ExpanderArgs {
    /// Vertex count.
    #[arg(long)]
    n: usize,
    /// Degree (even).
    #[arg(long, default_value_t = 4)]
    degree: usize,
    /// Required expansion.
    #[arg(long, default_value_t = 1.0)]
    target_h: f64,
    #[arg(long)]
    seed: u64,
    /// Samples to try before giving up.
    #[arg(long, default_value_t = 200)]
    retries: usize,
    /// Also compute the exact expansion (n <= 20) and compare with the spectral bound.
    #[arg(long)]
    check: bool,
    /// Print the edge list.
    #[arg(long)]
    edges: bool,
}

#[derive(Debug, Subcommand)]
enum GenCommand {
    /// Random 3-SAT formula with a planted satisfying assignment.
    Cnf {
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        clauses: usize,
        #[arg(long)]
        seed: u64,
        /// Output file (default stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the planted assignment here.
        #[arg(long)]
        planted: Option<PathBuf>,
    },
    /// Feasible instance from random fragments of a hidden coloring.
    Hdx {
        #[arg(long)]
        length: usize,
        #[arg(long)]
        fragments: usize,
        #[arg(long)]
        min_len: usize,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        seed: u64,
        /// Output file (default stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the hidden coloring here.
        #[arg(long)]
        hidden: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct RoundtripArgs {
    /// DIMACS CNF input.
    input: PathBuf,
    /// Satisfying assignment to encode; found by exhaustive search when absent.
    #[arg(long)]
    assignment: Option<PathBuf>,
    #[command(flatten)]
    gap: GapFlags,
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
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(CliError { code, msg }) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
