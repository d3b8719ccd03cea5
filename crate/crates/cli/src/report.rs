//! JSON report written by every subcommand.
//!
//! Any field derived from random draws carries the seed and replicate count that
//! produced it, so re-running with those settings reproduces the report.

use boon_core::resampling::IntervalMethod;
use boon_core::{ConfidenceInterval, Direction, EstimatorKind};
use serde::Serialize;

use crate::input::{LoadedPool, PoolFormat, RowRejection};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: Tool,
    pub command: Vec<String>,
    pub pools: Vec<PoolFingerprint>,
    pub settings: Settings,
    pub results: Results,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for Tool {
    fn default() -> Self {
        Self {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PoolFingerprint {
    pub path: String,
    pub format: PoolFormat,
    pub metric: String,
    pub direction: DirectionName,
    pub validation_column: String,
    pub test_column: String,
    /// Accepted records.
    pub m: usize,
    pub rejected_rows: Vec<RowRejection>,
}

impl From<&LoadedPool> for PoolFingerprint {
    fn from(p: &LoadedPool) -> Self {
        Self {
            path: p.source.path.display().to_string(),
            format: p.source.format,
            metric: p.source.metric_name.clone(),
            direction: p.source.direction.into(),
            validation_column: p.source.validation_column.clone(),
            test_column: p.source.test_column.clone(),
            m: p.pool.len(),
            rejected_rows: p.rejected.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionName {
    Max,
    Min,
}

impl From<Direction> for DirectionName {
    fn from(d: Direction) -> Self {
        match d {
            Direction::Maximize => DirectionName::Max,
            Direction::Minimize => DirectionName::Min,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Settings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_values: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimator: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicates: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples_per_m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub with_replacement: Option<bool>,
}

pub fn estimator_name(kind: EstimatorKind) -> &'static str {
    match kind {
        EstimatorKind::Nonparametric => "nonparametric",
        EstimatorKind::GaussianParametric => "gaussian",
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Results {
    Summary(SummaryResult),
    Boon { estimates: Vec<EstimateEntry> },
    Curve { points: Vec<CurveEntry> },
    Compare(CompareResult),
}

#[derive(Debug, Clone, Serialize)]
pub struct SummaryResult {
    pub m: usize,
    pub mean_test: f64,
    pub std_test: Option<f64>,
    pub iqr_test: Option<f64>,
    pub min_test: f64,
    pub max_test: f64,
    pub mean_validation: f64,
    pub std_validation: Option<f64>,
    pub spearman_val_test: Option<f64>,
    pub pearson_val_test: Option<f64>,
    pub normality: Option<NormalityEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalityEntry {
    pub test: &'static str,
    pub statistic: f64,
    pub adjusted_statistic: f64,
    pub critical_value_5pct: f64,
    pub reject_at_5pct: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalEntry {
    pub lo: f64,
    pub hi: f64,
    pub level: f64,
    pub method: &'static str,
    pub replicates: usize,
    pub seed: u64,
}

impl IntervalEntry {
    pub fn new(ci: &ConfidenceInterval, seed: u64) -> Self {
        let method = match ci.method {
            IntervalMethod::Bootstrap => "bootstrap",
            IntervalMethod::SmoothedBootstrap => "smoothed_bootstrap",
            IntervalMethod::MonteCarloGaussian => "monte_carlo_gaussian",
        };
        Self {
            lo: ci.lo,
            hi: ci.hi,
            level: ci.level,
            method,
            replicates: ci.replicates,
            seed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateEntry {
    pub n: u32,
    pub m: usize,
    pub estimator: &'static str,
    pub value: f64,
    pub extrapolative: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci: Option<IntervalEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveEntry {
    pub m: usize,
    pub expected_best_test: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci: Option<IntervalEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareResult {
    pub n: u32,
    pub boon_a: f64,
    pub boon_b: f64,
    pub delta: f64,
    pub ci: IntervalEntry,
    pub significant: bool,
}
