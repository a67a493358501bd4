mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use raag_core::quotients::DEFAULT_DEGREE_CAP;
use raag_core::ExactField;

#[derive(Parser, Debug)]
#[command(name = "raagkit", version, about = "Right-angled Artin group toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Droms and chordality tests with a forbidden-subgraph witness
    Classify(GraphArgs),
    /// Z∗-decomposition tree and level of a Droms graph
    Decompose(GraphArgs),
    /// Euler characteristic from the clique counts
    Chi(GraphArgs),
    /// Reduced Betti numbers of the flag complex
    Betti(BettiArgs),
    /// Homology of one finite cover of the Salvetti complex
    Cover(CoverArgs),
    /// Predicted limits, measured ratios along a chain, and verdicts
    Gradient(GradientArgs),
    /// Fiber product of two RAAGs over a common finite quotient
    Fiber(FiberArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Output format (defaults depend on the subcommand)
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report to FILE instead of stdout
    #[arg(short = 'o', long = "output", value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    pub graph: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct BettiArgs {
    pub graph: PathBuf,
    #[arg(long, default_value = "q")]
    pub field: ExactField,
    /// Highest reduced degree reported
    #[arg(long)]
    pub max_dim: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ChainArgs {
    /// Comma-separated congruence moduli
    #[arg(long, value_delimiter = ',', conflicts_with = "chain_pow")]
    pub chain: Option<Vec<u64>>,
    /// p:n expands to p, p^2, ..., p^n
    #[arg(long, value_name = "P:N", value_parser = parse_chain_pow)]
    pub chain_pow: Option<PowChain>,
    /// Upper bound on the degree of any coset action
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    pub cap: usize,
}

#[derive(Args, Debug)]
pub struct CoverArgs {
    pub graph: PathBuf,
    #[command(flatten)]
    pub chain: ChainArgs,
    /// JSON file with generator images of a regular action
    #[arg(long, conflicts_with_all = ["chain", "chain_pow"])]
    pub quotient: Option<PathBuf>,
    #[arg(long, default_value = "q")]
    pub field: ExactField,
    #[arg(long)]
    pub max_dim: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct GradientArgs {
    pub graph: PathBuf,
    /// Predict as the direct product of these Droms graphs
    #[arg(long, num_args = 1.., value_name = "GRAPH")]
    pub product_of: Option<Vec<PathBuf>>,
    #[command(flatten)]
    pub chain: ChainArgs,
    /// Require the moduli to form a certified nested chain
    #[arg(long)]
    pub nested: bool,
    #[arg(long, default_value = "q")]
    pub field: ExactField,
    #[arg(long)]
    pub max_dim: Option<usize>,
    /// Fewest chain steps for a verdict
    #[arg(long, default_value_t = 3)]
    pub min_steps: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct FiberArgs {
    pub left: PathBuf,
    pub right: PathBuf,
    /// Common congruence quotient (Z/m)^k of both graphs
    #[arg(long, value_name = "M", conflicts_with = "quotients")]
    pub chain: Option<u64>,
    /// JSON files with regular actions of the two quotients
    #[arg(long, num_args = 2, value_names = ["Q1", "Q2"])]
    pub quotients: Option<Vec<PathBuf>>,
    /// JSON array identifying points of the second quotient with the first
    #[arg(long)]
    pub iso: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    pub cap: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Debug)]
pub struct PowChain(Vec<u64>);

fn parse_chain_pow(s: &str) -> Result<PowChain, String> {
    let (p, n) = s.split_once(':').ok_or("expected P:N")?;
    let p: u64 = p.trim().parse().map_err(|_| format!("bad base {p:?}"))?;
    let n: u32 = n.trim().parse().map_err(|_| format!("bad exponent {n:?}"))?;
    if p < 2 || n == 0 {
        return Err("need P >= 2 and N >= 1".into());
    }
    (1..=n)
        .map(|k| p.checked_pow(k).ok_or_else(|| format!("{p}^{k} overflows")))
        .collect::<Result<_, _>>()
        .map(PowChain)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let body = rendered.strip_prefix("error: ").unwrap_or(&rendered);
            eprint!("error: usage: {body}");
            return ExitCode::from(error::EXIT_USAGE);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {}", e.code, e.message);
            ExitCode::from(e.exit)
        }
    }
}

impl ChainArgs {
    fn moduli(&self) -> Option<&[u64]> {
        self.chain.as_deref().or(self.chain_pow.as_ref().map(|p| p.0.as_slice()))
    }
}

