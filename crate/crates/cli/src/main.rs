//! `svtab`: enumerate, count and verify two-row set-valued tableaux and
//! their companion objects from the command line.

mod commands;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use svtab::{Marker, Partition, PathTag};

#[derive(Parser, Debug)]
#[command(name = "svtab", version, about = "Set-valued tableaux, 321-avoiders and bicolored paths")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads; SVTAB_THREADS takes precedence. Defaults to the
    /// number of logical cores.
    #[arg(long, global = true)]
    pub parallel: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List every object of a family.
    Enumerate(FamilyArgs),
    /// Evaluate a closed form or count a family.
    Count(CountArgs),
    /// Emit a table of closed-form values.
    Table(TableArgs),
    /// Emit the q-Catalan or q-Narayana coefficient table.
    Qtable(QtableArgs),
    /// Apply one of the bijections to a single object.
    Biject(BijectArgs),
    /// Print coefficients of a path generating function.
    Series(SeriesArgs),
    /// Expected number of steps of one kind over the doubly restricted paths.
    Expect(ExpectArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Set-valued tableaux of one shape with k extra entries.
    Svsyt,
    /// Standard tableaux of one shape.
    Syt,
    /// All two-row rectangular set-valued tableaux with n entries.
    TwoRowUnion,
    /// 321-avoiding permutations of [n].
    Avoid321,
    /// Bicolored paths of one family (see --tag).
    Path,
    /// Ballotlike paths of length n ending at height i.
    Ballotlike,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Shape as comma-separated parts, e.g. 3,1.
    #[arg(long)]
    pub shape: Option<Partition>,
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub i: Option<usize>,
    /// Path family: motz, motzE, motzT or motzET.
    #[arg(long)]
    pub tag: Option<PathTag>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Formula {
    Catalan,
    Narayana,
    Ballot,
    E,
    F,
    Act,
    Peaks,
    MoreShapesFirst,
    MoreShapesSecond,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    /// Count a family by enumeration.
    #[arg(long, value_enum, conflicts_with = "formula")]
    pub family: Option<Family>,
    /// Evaluate a closed form.
    #[arg(long, value_enum)]
    pub formula: Option<Formula>,
    #[arg(long)]
    pub shape: Option<Partition>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub i: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub tag: Option<PathTag>,
    /// Also count the objects directly and compare.
    #[arg(long)]
    pub oracle: bool,
    /// Exit with status 1 unless the count equals this value.
    #[arg(long)]
    pub expect: Option<num_bigint::BigInt>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    /// e and f for 0 <= i <= n.
    Ef,
    /// Both closed forms for 2 x b rectangles, 2b + k <= max.
    Act,
    /// Narayana numbers.
    Narayana,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(value_enum)]
    pub kind: TableKind,
    #[arg(long, default_value_t = 8)]
    pub max_n: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum QtableKind {
    Catalan,
    Narayana,
}

#[derive(Args, Debug)]
pub struct QtableArgs {
    #[arg(value_enum)]
    pub kind: QtableKind,
    #[arg(long, default_value_t = 5)]
    pub max_n: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Map {
    /// Tableau to 321-avoiding permutation.
    Alpha,
    AlphaInv,
    /// Rectangular tableau to doubly restricted path.
    Beta,
    BetaInv,
    /// Tableau of shape (b, b-i) to ballotlike path.
    BetaBallot,
    BetaInvBallot,
    /// Contracts the first down step.
    Phi,
    PhiInv,
    /// Tableau to (standard tableau, cuts, picks).
    Decompose,
    /// Half-turn complement of a (b+1, b) tableau.
    Rotate,
    RotateInv,
}

#[derive(Args, Debug)]
pub struct BijectArgs {
    #[arg(value_enum)]
    pub map: Map,
    /// The object: a tableau like "{1,2} {3} / {4}" (or its JSON form), a
    /// permutation like "2 1 3", or a path like "UuDd".
    pub input: String,
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    /// E, E1, E2, E12, or E2-full for (1 + E2)/(1 - ut).
    #[arg(long, default_value = "E")]
    pub name: String,
    #[arg(long, default_value_t = 6)]
    pub order: usize,
    /// Set every marker to 1.
    #[arg(long)]
    pub at_ones: bool,
}

#[derive(Args, Debug)]
pub struct ExpectArgs {
    #[arg(long)]
    pub n: usize,
    /// U, D, u or d.
    #[arg(long, value_parser = parse_marker)]
    pub marker: Marker,
}

fn parse_marker(s: &str) -> Result<Marker, String> {
    match s {
        "U" => Ok(Marker::U),
        "D" => Ok(Marker::D),
        "u" => Ok(Marker::Umber),
        "d" => Ok(Marker::Denim),
        _ => Err(format!("unknown marker {s:?}, expected U, D, u or d")),
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    All,
    Catalan,
    Ef,
    Ballot,
    ClosedForms,
    Bijections,
    Paths,
    Series,
    Expect,
    Qtables,
    Posets,
    Pi,
    Equidistribution,
    Peaks,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Budget {
    /// Small ranges, a few seconds.
    Quick,
    /// The full ranges.
    Desk,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long, value_enum, default_value_t = Budget::Desk)]
    pub budget: Budget,
    /// Series truncation order.
    #[arg(long)]
    pub order: Option<usize>,
    /// Largest poset in the catalog to check.
    #[arg(long)]
    pub max_elements: Option<usize>,
    /// Largest number of extra entries for poset checks.
    #[arg(long)]
    pub max_k: Option<usize>,
    /// Report format; overrides --format.
    #[arg(long, value_enum)]
    pub report: Option<Format>,
    /// Include wall times, which makes the report vary between runs.
    #[arg(long)]
    pub timings: bool,
}

/// Failures that map to exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Bad parameters: exit 2.
    Usage(String),
    /// An identity or comparison did not hold: exit 1.
    Mismatch,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn threads(flag: Option<usize>) -> Result<Option<usize>, Failure> {
    match std::env::var("SVTAB_THREADS") {
        Ok(v) => v
            .parse::<usize>()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("SVTAB_THREADS must be a number, got {v:?}"))),
        Err(_) => Ok(flag),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = threads(cli.parallel)? {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let mut out = output::Sink::open(cli.output.as_deref(), cli.format)?;
    let ok = match &cli.command {
        Command::Enumerate(a) => commands::enumerate(a, &mut out)?,
        Command::Count(a) => commands::count(a, &mut out)?,
        Command::Table(a) => commands::table(a, &mut out)?,
        Command::Qtable(a) => commands::qtable(a, &mut out)?,
        Command::Biject(a) => commands::biject(a, &mut out)?,
        Command::Series(a) => commands::series(a, &mut out)?,
        Command::Expect(a) => commands::expect(a, &mut out)?,
        Command::Verify(a) => verify::run(a, &mut out)?,
    };
    out.finish()?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
