use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::grid::{Grid, List};
use crate::output::Format;

const GRID_HELP: &str =
    "Grids are `VALUE` or `LO:HI:STEPS[:log|:lin]`; r-grids default to log spacing, all others to linear. \
At most 1000000 evaluation points per run. Set CHI2REFINE_THREADS to limit parallelism.";

#[derive(Debug, Parser)]
#[command(name = "chi2refine", version, about = "Refined normal approximations to chi-square survival functions", after_help = GRID_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format
    #[arg(long, value_enum, default_value = "table", global = true)]
    pub format: Format,
    /// Write output to this file instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Relative tolerance of the oracle series
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Term cap of the oracle series
    #[arg(long, global = true)]
    pub max_terms: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact survival against the order 0-3 approximations on a threshold grid
    Survival(SurvivalArgs),
    /// Maximal approximation error over (r, lambda, order) grids
    Scan(ScanArgs),
    /// Leading error constants M0, M1, M2
    Constants(ConstantsArgs),
    /// Exact median against r + lambda - 2/3
    Median(RLambda),
    /// Smallest r meeting an error target
    Detect(DetectArgs),
    /// Local expansion of the density ratio
    Llt(LltArgs),
    /// Kolmogorov, total variation and Hellinger distances to the matching normal
    Metrics(RLambda),
    /// Central moments, optionally checked by Monte Carlo
    Moments(MomentsArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
#[command(group = clap::ArgGroup::new("point").required(true).args(["a", "delta"]))]
pub struct SurvivalArgs {
    #[arg(long)]
    pub r: f64,
    #[arg(long, default_value = "0")]
    pub lambda: f64,
    /// Threshold grid
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<Grid>,
    /// Standardized threshold grid
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<Grid>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ScanArgs {
    #[arg(long)]
    pub r: Grid,
    #[arg(long, default_value = "0")]
    pub lambda: Grid,
    /// Comma-separated approximation orders
    #[arg(long, default_value = "0,1,2,3")]
    pub order: List<u8>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ConstantsArgs {
    #[arg(long, default_value = "0,1,2")]
    pub order: List<u32>,
    #[arg(long, default_value = "0")]
    pub lambda: Grid,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct RLambda {
    #[arg(long)]
    pub r: Grid,
    #[arg(long, default_value = "0")]
    pub lambda: Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Invert the leading term M_k / r^((k+1)/2), ignoring the remainder
    Leading,
    /// Search integer r against the exact maximal error
    Scan,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct DetectArgs {
    #[arg(long)]
    pub target: f64,
    #[arg(long, default_value = "0")]
    pub lambda: f64,
    #[arg(long, default_value = "0,1,2")]
    pub order: List<u8>,
    #[arg(long, value_enum, default_value = "leading")]
    pub mode: Mode,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
#[command(group = clap::ArgGroup::new("point").required(true).args(["a", "delta"]))]
pub struct LltArgs {
    #[arg(long)]
    pub r: Grid,
    #[arg(long, default_value = "0")]
    pub lambda: Grid,
    /// Evaluation point grid
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<Grid>,
    /// Standardized evaluation point grid
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<Grid>,
    /// Bulk region parameter in (0, 1)
    #[arg(long, default_value = "0.5")]
    pub eta: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct MomentsArgs {
    #[arg(long)]
    pub r: Grid,
    #[arg(long, default_value = "0")]
    pub lambda: Grid,
    /// Comma-separated moment orders from {1,2,3,4,6}
    #[arg(long, default_value = "2,3,4,6")]
    pub n: List<u32>,
    /// Monte Carlo draws per (r, lambda); 0 disables the check
    #[arg(long, default_value = "0")]
    pub samples: usize,
    /// Seed of the Monte Carlo check
    #[arg(long, default_value = "0")]
    pub seed: u64,
}
