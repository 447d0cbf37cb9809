mod cache;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cache::Cache;
use crate::commands::{LambdaArg, Outcome};

#[derive(Debug, Parser)]
#[command(name = "derangements", version, about = "Counting and verification tools for block-sorted derangements")]
struct Cli {
    /// Skip the result cache for this invocation.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Indent JSON output.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count permutations attached to a composition.
    Count(CountArgs),
    /// Coefficient of x^a in the block generating function.
    Series(SeriesArgs),
    /// λ-factorial polynomials, or the λ-factorial sum of a composition.
    Lamfak(LamfakArgs),
    /// The coloured Euler difference tables.
    Table(TableArgs),
    /// Apply one of the coloured bijections.
    Bijection(BijectionArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Dj,
    Dstar,
    Dhat,
    Preimage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Brute,
    Genfunc,
    Factorial,
    DerangementBasis,
    Members,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// Comma-separated parts, zeros allowed, e.g. 4,2.
    #[arg(long)]
    pub composition: String,
    #[arg(long, value_enum, default_value = "dj")]
    pub mode: Mode,
    /// Block index; defaults to the number of blocks.
    #[arg(long)]
    pub j: Option<usize>,
    #[arg(long, value_enum, default_value = "brute")]
    pub method: Method,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long)]
    pub composition: String,
    /// Number of leading blocks carrying a 1/(1+x_i) factor; defaults to all.
    #[arg(long)]
    pub j: Option<usize>,
    /// Also list every nonzero coefficient up to the composition.
    #[arg(long)]
    pub terms: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "target")]
pub struct LamfakTarget {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub composition: Option<String>,
}

#[derive(Debug, Args)]
pub struct LamfakArgs {
    #[command(flatten)]
    pub target: LamfakTarget,
    /// An integer, or `symbolic` for coefficients in λ.
    #[arg(long, default_value = "symbolic")]
    pub lambda: LambdaArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    E,
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Json,
    Csv,
    Text,
    Bfile,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub n_max: usize,
    #[arg(long, default_value = "symbolic")]
    pub lambda: LambdaArg,
    #[arg(long, value_enum, default_value = "d")]
    pub kind: TableKind,
    #[arg(long, value_enum, default_value = "json")]
    pub format: TableFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapName {
    Theta,
    ThetaInverse,
    Eta,
    EtaInverse,
    Zeta1,
    Zeta1Preimages,
    Zeta2,
    Zeta2Inverse,
}

#[derive(Debug, Args)]
pub struct BijectionArgs {
    #[arg(long, value_enum)]
    pub map: MapName,
    #[arg(long)]
    pub k: usize,
    /// Target length; inferred from the argument for inverse maps.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub lambda: u32,
    /// JSON argument, e.g. {"index":1,"perm":{"perm":[2,1,3,4],"colours":{"3":2}}}.
    #[arg(long)]
    pub arg: String,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(subcommand)]
    pub suite: Suite,
}

#[derive(Debug, Subcommand)]
pub enum Suite {
    /// Every suite up to n-max.
    All(NMax),
    Perm(NMax),
    Series(NMax),
    Counting(NMax),
    Lambda(NMax),
    Euler(NMax),
    Bijections(NMax),
    /// Correlation over all ordered pairs of compositions of n.
    Correlation {
        #[arg(long)]
        n: usize,
    },
    /// Moving one element between the two leading blocks.
    Unimodality {
        #[arg(long)]
        a: usize,
        #[arg(long, default_value_t = 0)]
        s: usize,
        #[arg(long, default_value = "")]
        tail: String,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct NMax {
    #[arg(long, default_value_t = 6)]
    pub n_max: usize,
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let cache = (!cli.no_cache).then(Cache::from_env);
    let outcome = match &cli.command {
        Command::Count(args) => commands::count(args, cache.as_ref()),
        Command::Series(args) => commands::series(args, cache.as_ref()),
        Command::Lamfak(args) => commands::lamfak(args, cache.as_ref()),
        Command::Table(args) => commands::table(args, cache.as_ref()),
        Command::Bijection(args) => commands::bijection(args),
        Command::Verify(args) => commands::verify(&args.suite),
    };
    match outcome {
        Ok(Outcome::Json { value, ok }) => {
            let text = if cli.pretty {
                serde_json::to_string_pretty(&value)
            } else {
                serde_json::to_string(&value)
            };
            emit(&format!("{}\n", text.expect("JSON values always serialize")));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Ok(Outcome::Text(text)) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
