mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use boolprice::verify::DEFAULT_SEED;
use boolprice::Caps;
use clap::{Args, Parser, Subcommand};

use crate::report::Output;

#[derive(Debug, Parser)]
#[command(name = "boolprice", version, about = "Evaluate Boolean functions with priced variables")]
struct Cli {
    /// Seed for random presets and verification suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Raise or lower the exhaustive-search and proof-enumeration caps.
    #[arg(long, global = true)]
    cap_n: Option<usize>,
    /// Write the JSON report to this path (`-` for stdout).
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct FunctionArg {
    /// Generator (`fstar:2`, `g`, `family:1,2`, `parity:4`, `majority:5`, `sym:0011`), file or DNF text.
    #[arg(long = "f")]
    f: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Structural measures: PROOF, k, l, certificate counts, spread.
    Analyze(FunctionArg),
    /// Competitive ratio of an algorithm, exhaustively or against an adversary.
    Ratio {
        #[command(flatten)]
        f: FunctionArg,
        /// greedy, bf2, lpa, lpa-fresh or order:<v,v,...>
        #[arg(long, default_value = "greedy")]
        alg: String,
        /// unit, extremal, random, random:<seed> or a JSON cost file.
        #[arg(long)]
        cost: Option<String>,
        /// symmetric, survival:c1, survival:c2 or factored.
        #[arg(long)]
        adversary: Option<String>,
        /// Include the per-assignment table.
        #[arg(long)]
        table: bool,
    },
    /// The proof-set linear program.
    #[command(subcommand)]
    Lp(LpCommand),
    /// Quadratic functions.
    #[command(subcommand)]
    Quad(QuadCommand),
    /// Symmetric profile analysis.
    Sym {
        /// f̂(0)…f̂(n) as a 0/1 string.
        profile: String,
        #[arg(long)]
        cost: Option<String>,
    },
    /// Run a verification suite: symmetric, quadratic, lp, lemma2 or all.
    Verify { suite: String },
    /// Print a generated function as DNF or truth table.
    Gen {
        generator: String,
        /// dnf or table
        #[arg(long, default_value = "dnf")]
        format: String,
    },
}

#[derive(Debug, Subcommand)]
enum LpCommand {
    /// Leximin optimal solution of the LP.
    Solve(FunctionArg),
    /// Δ(f) and the restriction attaining it.
    Delta(FunctionArg),
    /// Exhaustive LPA ratio next to Δ(f).
    Lpa {
        #[command(flatten)]
        f: FunctionArg,
        #[arg(long)]
        cost: Option<String>,
        /// Compare original costs at each step instead of residual costs.
        #[arg(long)]
        fresh: bool,
    },
    /// The (k, t) family.
    Family {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
    },
    /// Factored-function checks: Γ, certificate, adversary, feasible solution, Δ.
    #[command(name = "lemma2", alias = "factored")]
    Factored {
        #[command(flatten)]
        f: FunctionArg,
        /// Mixed variables; detected from the DNF when omitted.
        #[arg(long)]
        z: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum QuadCommand {
    /// Largest-maxterm survival analysis.
    Analyze(FunctionArg),
    /// Print the f* DNF.
    Fstar {
        #[arg(long)]
        s: usize,
    },
}

pub enum Failure {
    Input(String),
    Verification,
}

impl From<boolprice::Error> for Failure {
    fn from(e: boolprice::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.cap_n {
        if n > boolprice::caps::MAX_VARIABLES {
            eprintln!("error: --cap-n {n} exceeds {}", boolprice::caps::MAX_VARIABLES);
            return ExitCode::from(2);
        }
        let defaults = Caps::default();
        Caps { table_n: defaults.table_n, proof_n: n, exhaustive_n: n }.install();
    }
    let out = Output { json: cli.json.clone() };
    match dispatch(&cli, &out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli, out: &Output) -> Result<(), Failure> {
    let seed = cli.seed;
    let report = match &cli.command {
        Command::Analyze(f) => commands::analyze(&f.f, seed)?,
        Command::Ratio { f, alg, cost, adversary, table } => {
            commands::ratio(&f.f, alg, cost.as_deref(), adversary.as_deref(), *table, seed)?
        }
        Command::Lp(LpCommand::Solve(f)) => commands::lp_solve(&f.f, seed)?,
        Command::Lp(LpCommand::Delta(f)) => commands::lp_delta(&f.f, seed)?,
        Command::Lp(LpCommand::Lpa { f, cost, fresh }) => commands::lp_lpa(&f.f, cost.as_deref(), *fresh, seed)?,
        Command::Lp(LpCommand::Family { k, t }) => commands::lp_family(*k, *t, seed)?,
        Command::Lp(LpCommand::Factored { f, z }) => commands::lp_factored(&f.f, z.as_deref(), seed)?,
        Command::Quad(QuadCommand::Analyze(f)) => commands::quad_analyze(&f.f, seed)?,
        Command::Quad(QuadCommand::Fstar { s }) => return commands::quad_fstar(*s, out),
        Command::Sym { profile, cost } => commands::sym(profile, cost.as_deref(), seed)?,
        Command::Verify { suite } => return commands::verify(suite, seed, out),
        Command::Gen { generator, format } => return commands::gen(generator, format, out),
    };
    out.emit(&report, &report.text())?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
