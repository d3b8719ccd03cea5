use std::path::PathBuf;
use std::str::FromStr;

use boon_core::{Bandwidth, Direction, EstimatorKind};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::input::PoolFormat;

pub const DEFAULT_N: u32 = 5;
pub const DEFAULT_REPLICATES: usize = 10_000;
pub const DEFAULT_LEVEL: f64 = 0.95;

/// Expected best-out-of-n performance from repeated-training result pools.
#[derive(Debug, Parser)]
#[command(name = "boon", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Master seed for every random draw.
    #[arg(long, global = true, env = "BOON_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Worker threads for resampling; 1 runs serially, 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Write the full JSON report to this path.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Descriptive statistics of a result pool.
    Summarize {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Boo(n) estimates, optionally with bootstrap intervals.
    Boon {
        #[command(flatten)]
        input: InputArgs,
        /// Number of runs to normalize to; comma separated for several.
        #[arg(long = "n", value_delimiter = ',', default_values_t = [DEFAULT_N])]
        n: Vec<u32>,
        #[arg(long, value_enum, default_value_t = EstimatorArg::Nonparametric)]
        estimator: EstimatorArg,
        /// Attach a percentile bootstrap interval with this many replicates
        /// (10000 when given without a value, or when --bandwidth is set).
        #[arg(long = "bootstrap", value_name = "B", num_args = 0..=1,
              default_missing_value = "10000")]
        bootstrap: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_LEVEL)]
        level: f64,
        /// Smooth the bootstrap with a Gaussian kernel (`auto` or a bandwidth).
        #[arg(long)]
        bandwidth: Option<BandwidthArg>,
    },
    /// Expected best-validation test score for pool sizes 1..=m-max.
    Curve {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 50)]
        m_max: usize,
        #[arg(long, default_value_t = 100_000)]
        samples_per_m: usize,
        /// Replicates for the smoothed-bootstrap band.
        #[arg(long = "bootstrap", value_name = "B", default_value_t = DEFAULT_REPLICATES)]
        bootstrap: usize,
        #[arg(long, default_value_t = DEFAULT_LEVEL)]
        level: f64,
        #[arg(long, default_value = "auto")]
        bandwidth: BandwidthArg,
        /// Skip the band; ci_lo/ci_hi are left empty.
        #[arg(long)]
        no_band: bool,
        /// Draw each sample without replacement (m-max must not exceed the pool size).
        #[arg(long)]
        without_replacement: bool,
        /// Write the curve as CSV (m,expected_best_test,ci_lo,ci_hi).
        #[arg(long)]
        curve_output: Option<PathBuf>,
    },
    /// Boo(n) difference between two pools (second minus first).
    Compare {
        input_a: PathBuf,
        input_b: PathBuf,
        #[command(flatten)]
        columns: ColumnArgs,
        /// Direction of the second file (defaults to --direction); the two must agree.
        #[arg(long, value_enum)]
        direction_b: Option<DirectionArg>,
        #[arg(long = "n", default_value_t = DEFAULT_N)]
        n: u32,
        #[arg(long = "bootstrap", value_name = "B", default_value_t = DEFAULT_REPLICATES)]
        bootstrap: usize,
        #[arg(long, default_value_t = DEFAULT_LEVEL)]
        level: f64,
    },
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Result pool file.
    pub input: PathBuf,
    #[command(flatten)]
    pub columns: ColumnArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ColumnArgs {
    /// Validation and test column names.
    #[arg(
        long,
        value_delimiter = ',',
        num_args = 1,
        default_value = "validation,test"
    )]
    pub columns: Vec<String>,
    /// Input format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<PoolFormat>,
    #[arg(long, value_enum, default_value_t = DirectionArg::Max)]
    pub direction: DirectionArg,
    /// Metric label recorded in the report.
    #[arg(long, default_value = "score")]
    pub metric: String,
    /// Drop malformed rows (listed in the report) instead of failing.
    #[arg(long)]
    pub skip_invalid: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimatorArg {
    Nonparametric,
    Gaussian,
}

impl From<EstimatorArg> for EstimatorKind {
    fn from(e: EstimatorArg) -> Self {
        match e {
            EstimatorArg::Nonparametric => EstimatorKind::Nonparametric,
            EstimatorArg::Gaussian => EstimatorKind::GaussianParametric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Max,
    Min,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Max => Direction::Maximize,
            DirectionArg::Min => Direction::Minimize,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandwidthArg(pub Bandwidth);

impl FromStr for BandwidthArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(BandwidthArg(Bandwidth::Auto));
        }
        match s.parse::<f64>() {
            Ok(h) if h >= 0.0 && h.is_finite() => Ok(BandwidthArg(Bandwidth::Fixed(h))),
            _ => Err(format!(
                "expected `auto` or a non-negative number, got `{s}`"
            )),
        }
    }
}

impl std::fmt::Display for BandwidthArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.0 {
            Bandwidth::Auto => f.write_str("auto"),
            Bandwidth::Fixed(h) => write!(f, "{h}"),
        }
    }
}
