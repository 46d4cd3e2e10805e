//! `diapoly`: build and solve diameter programs, enumerate diameter
//! polytopes and run the verification suites from the command line.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use diapoly::Error;

#[derive(Parser, Debug)]
#[command(name = "diapoly", version, about = "Diameter binary programs and their polytopes")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a binary program (or the model built from an instance).
    Solve(SolveArgs),
    /// Find two optimal solutions that are as far apart as possible.
    Diameter(DiameterArgs),
    /// Enumerate the points of a diameter polytope.
    Points(PolytopeArgs),
    /// Affine dimension of a diameter polytope.
    Dim(PolytopeArgs),
    /// Test inequalities for validity and facet definition on a diameter polytope.
    CheckFacet(CheckFacetArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Problem {
    /// A binary program as JSON or LP text.
    Raw,
    /// Linear ordering instance (JSON or LOLIB matrix).
    Lop,
    /// Symmetric TSP instance (JSON or TSPLIB explicit matrix).
    Tsp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SolverKind {
    Bnb,
    Enumerate,
}

#[derive(Args, Debug)]
struct Caps {
    /// Largest variable count for exhaustive scans.
    #[arg(long = "cap", env = "DIAPOLY_ENUM_CAP", default_value_t = diapoly::bpcore::DEFAULT_ENUMERATION_CAP)]
    enumeration: usize,

    /// Largest city count for which subtour rows are generated.
    #[arg(long = "subtour-cap", env = "DIAPOLY_SUBTOUR_CAP", default_value_t = diapoly::tsp::SUBTOUR_CAP)]
    subtour: usize,
}

#[derive(Args, Debug)]
struct SolveArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Problem::Raw)]
    problem: Problem,
    #[arg(long, value_enum, default_value_t = SolverKind::Bnb)]
    solver: SolverKind,
    #[command(flatten)]
    caps: Caps,
}

#[derive(Args, Debug)]
struct DiameterArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Problem::Raw)]
    problem: Problem,
    /// `full` keeps the lower coupling rows; `conjugate` drops them.
    #[arg(long, default_value = "full")]
    variant: diapoly::diameter::Variant,
    /// Override the penalty weight, e.g. `1/12`.
    #[arg(long, value_name = "NUM/DEN")]
    epsilon: Option<String>,
    /// Certify that every optimum has exactly this many ones (conjugate
    /// variant); set automatically for lop and tsp instances.
    #[arg(long)]
    constant_norm: Option<usize>,
    /// Also write the derived program in LP format, with a JSON sidecar.
    #[arg(long, value_name = "PATH")]
    lp: Option<PathBuf>,
    #[command(flatten)]
    caps: Caps,
}

#[derive(Args, Debug)]
struct PolytopeArgs {
    /// Binary program whose conjugate diameter polytope is wanted
    /// (ignored with `--problem lop|tsp`).
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Problem::Raw)]
    problem: Problem,
    /// Item or city count for `--problem lop|tsp`.
    #[arg(long)]
    n: Option<usize>,
    /// Allow the long-running sizes (4+ items, 6+ cities).
    #[arg(long)]
    long: bool,
    #[command(flatten)]
    caps: Caps,
}

#[derive(Args, Debug)]
struct CheckFacetArgs {
    #[command(flatten)]
    polytope: PolytopeArgs,
    /// JSON list of inequalities `{a, a0, sense}`.
    #[arg(long)]
    ineq: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name, or `all`.
    suite: String,
    #[arg(long, default_value_t = diapoly::verify::DEFAULT_SEED)]
    seed: u64,
    /// Include long-running scopes.
    #[arg(long)]
    long: bool,
    /// Number of random trials (suite default when omitted).
    #[arg(long)]
    trials: Option<usize>,
}

/// Process exit status for each outcome.
mod exit {
    pub const OK: u8 = 0;
    pub const VERIFICATION_FAILED: u8 = 1;
    pub const INFEASIBLE: u8 = 2;
    pub const PARSE: u8 = 3;
    pub const CAP: u8 = 4;
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Infeasible => exit::INFEASIBLE,
                Error::CapExceeded { .. } => exit::CAP,
                Error::Certificate(_) => exit::VERIFICATION_FAILED,
                _ => exit::PARSE,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() || cause.downcast_ref::<serde_json::Error>().is_some() {
            return exit::PARSE;
        }
    }
    exit::PARSE
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::PARSE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(outcome) => ExitCode::from(outcome),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
