//! `grt`: command-line front end for graph restricted tensors.
//!
//! Exit codes: 0 success or pass, 1 verification failure, 2 usage or input
//! error, 3 numerical non-convergence.

mod commands;
mod inputs;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grt_core::GrtError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    NonConvergence(String),
    #[error(transparent)]
    Core(#[from] GrtError),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::NonConvergence(_) | CliError::Core(GrtError::Eigen) => 3,
            CliError::Core(_) => 2,
        }
    }
}

/// Outcome of a command that ran to completion.
pub enum Status {
    Ok,
    Fail,
}

#[derive(Parser, Debug)]
#[command(name = "grt", version, about = "Graph restricted tensors: construction, verification, search and holographic transfer spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a catalog tensor, or list the families with --list
    Catalog(CatalogArgs),
    /// Expand orbit values into a full symmetric tensor
    Expand(ExpandArgs),
    /// Check a tensor against a graph or hypergraph
    Verify(VerifyArgs),
    /// Three-party purity deficits of a hexagonal tensor
    Entropy(TensorArg),
    /// Multi-start search for hexagonal solutions; writes the scatter CSV
    Solve(SolveArgs),
    /// Spectrum of the transfer node between two legs
    Node(NodeArgs),
    /// Scaling dimension from |lambda_2| or from a tensor's node
    Dimension(DimensionArgs),
    /// Boundary correlator on a tile network
    Correlate(CorrelateArgs),
    /// Sample transfer spectra of locally rotated combined tensors
    Violin(ViolinArgs),
    /// Build a frame tensor from random dual-unitary gates and check its isometries
    Frame(FrameArgs),
}

#[derive(Args, Debug)]
struct CatalogArgs {
    /// Print the families and their parameter ranges
    #[arg(long)]
    list: bool,
    #[arg(long, required_unless_present = "list")]
    family: Option<String>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, default_value_t = 0)]
    j: u8,
    #[arg(long, default_value_t = 0)]
    k: u8,
    #[arg(long, value_enum, default_value_t = BranchArg::Minus)]
    branch: BranchArg,
    #[arg(long)]
    variant: Option<String>,
    /// Number of legs (ghz, wheel)
    #[arg(long)]
    n: Option<usize>,
    /// Local dimension (ghz)
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BranchArg {
    Minus,
    Plus,
}

#[derive(Args, Debug)]
struct ExpandArgs {
    /// pentagon (8 values), hexagon (13 values) or hexagon-rotation (28 values)
    #[arg(long)]
    family: String,
    /// Comma-separated orbit values in representative order
    #[arg(long, allow_hyphen_values = true)]
    params: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TensorArg {
    /// JSON file or built-in name
    #[arg(long)]
    tensor: String,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    tensor: String,
    /// Graph or hypergraph JSON file, or a built-in name
    #[arg(long)]
    graph: String,
    /// Also require that no other subset is maximally mixed
    #[arg(long)]
    faithful: bool,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long, default_value_t = 200)]
    restarts: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 3000)]
    max_iter: usize,
    #[arg(long, value_enum, default_value_t = CostArg::Purity)]
    cost: CostArg,
    #[arg(long)]
    no_polish: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CostArg {
    Purity,
    Residual,
}

#[derive(Args, Debug)]
struct NodeArgs {
    #[arg(long)]
    tensor: String,
    /// Entry and exit legs (0-based positions)
    #[arg(long, num_args = 2)]
    legs: Vec<usize>,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["lambda2", "tensor"]))]
struct DimensionArgs {
    #[arg(long)]
    lambda2: Option<f64>,
    #[arg(long, requires = "legs")]
    tensor: Option<String>,
    #[arg(long, num_args = 2)]
    legs: Vec<usize>,
    /// Schläfli symbol p,q
    #[arg(long, default_value = "6,4")]
    tiling: String,
}

#[derive(Args, Debug)]
struct CorrelateArgs {
    /// Network name, e.g. depth1-6-4
    #[arg(long)]
    net: String,
    #[arg(long)]
    tensor: String,
    /// Comma-separated boundary probes, e.g. Z@3,X@17
    #[arg(long)]
    probes: String,
    /// Operator on one bulk leg, e.g. Z@0 (tile index)
    #[arg(long)]
    bulk: Option<String>,
    #[arg(long, value_enum, default_value_t = MethodArg::Path)]
    method: MethodArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Path,
    Brute,
}

#[derive(Args, Debug)]
struct ViolinArgs {
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Apply one Haar unitary to every leg instead of one per leg
    #[arg(long)]
    shared_unitary: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FrameArgs {
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Interaction strength of the dual-unitary gates
    #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
    j: f64,
    /// Use swap gates instead of random dual-unitary gates
    #[arg(long)]
    swap: bool,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("GRT_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("GRT_THREADS={v:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<Status, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Catalog(a) => commands::catalog(a),
        Command::Expand(a) => commands::expand(a),
        Command::Verify(a) => commands::verify(a),
        Command::Entropy(a) => commands::entropy(a),
        Command::Solve(a) => commands::solve(a),
        Command::Node(a) => commands::node(a),
        Command::Dimension(a) => commands::dimension(a),
        Command::Correlate(a) => commands::correlate(a),
        Command::Violin(a) => commands::violin(a),
        Command::Frame(a) => commands::frame(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("grt: {e}");
            ExitCode::from(e.code())
        }
    }
}
