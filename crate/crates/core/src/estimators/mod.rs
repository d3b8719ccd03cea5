//! Boo(n) estimation from a pool of observed `(validation, test)` scores.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::distributions::{std_normal_expected_max, GaussianParams};
use crate::error::{invalid_argument, Axis, Error, Result};

pub mod descriptive;
mod summary;

pub use summary::{anderson_darling_normality, summarize, AndersonDarling, PoolSummary};

/// One training run: its validation score and the corresponding test score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunRecord {
    pub validation: f64,
    pub test: f64,
}

impl RunRecord {
    pub fn new(validation: f64, test: f64) -> Self {
        Self { validation, test }
    }
}

/// Whether larger or smaller scores are better.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum Direction {
    #[default]
    Maximize,
    Minimize,
}

impl Direction {
    /// Multiplier that maps scores into the maximize orientation.
    pub fn sign(self) -> f64 {
        match self {
            Direction::Maximize => 1.0,
            Direction::Minimize => -1.0,
        }
    }

    /// Orders records from worst to best validation; equal validations are
    /// ordered by test score so the sequence is canonical.
    pub(crate) fn rank_order(self, a: &RunRecord, b: &RunRecord) -> Ordering {
        match self {
            Direction::Maximize => a
                .validation
                .total_cmp(&b.validation)
                .then(a.test.total_cmp(&b.test)),
            Direction::Minimize => (-a.validation)
                .total_cmp(&-b.validation)
                .then((-a.test).total_cmp(&-b.test)),
        }
    }
}

/// The `m` runs of one architecture.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultPool {
    records: Vec<RunRecord>,
    direction: Direction,
    metric_name: String,
}

pub(crate) fn validate_records(records: &[RunRecord]) -> Result<()> {
    if records.is_empty() {
        return Err(invalid_argument("result pool is empty"));
    }
    for (index, r) in records.iter().enumerate() {
        if !r.validation.is_finite() {
            return Err(Error::InvalidData {
                index,
                axis: Axis::Validation,
            });
        }
        if !r.test.is_finite() {
            return Err(Error::InvalidData {
                index,
                axis: Axis::Test,
            });
        }
    }
    Ok(())
}

impl ResultPool {
    pub fn new(records: Vec<RunRecord>, direction: Direction) -> Result<Self> {
        validate_records(&records)?;
        Ok(Self {
            records,
            direction,
            metric_name: String::new(),
        })
    }

    pub fn with_metric_name(mut self, name: impl Into<String>) -> Self {
        self.metric_name = name.into();
        self
    }

    /// Builds a pool where validation and test are the same score.
    pub fn single_evaluation(scores: &[f64], direction: Direction) -> Result<Self> {
        Self::new(
            scores.iter().map(|&s| RunRecord::new(s, s)).collect(),
            direction,
        )
    }

    pub fn records(&self) -> &[RunRecord] {
        &self.records
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn metric_name(&self) -> &str {
        &self.metric_name
    }

    /// Pool size `m`.
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn tests(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.test).collect()
    }

    pub fn validations(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.validation).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimatorKind {
    Nonparametric,
    GaussianParametric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoonEstimate {
    pub n: u32,
    pub m: usize,
    pub value: f64,
    pub kind: EstimatorKind,
    /// The pool is smaller than `n`, so the estimate extrapolates beyond the observed runs.
    pub extrapolative: bool,
}

/// Rank-weighted average of test scores, sorting `records` in place.
///
/// The j-th worst of `m` records by validation receives weight
/// `(j/m)^n - ((j-1)/m)^n`. A group of `k` records tied on validation at ranks
/// `j+1..=j+k` shares `((j+k)/m)^n - (j/m)^n` equally.
pub(crate) fn nonparametric_in_place(
    records: &mut [RunRecord],
    direction: Direction,
    n: u32,
) -> f64 {
    records.sort_unstable_by(|a, b| direction.rank_order(a, b));
    let m = records.len();
    let mf = m as f64;
    let nf = n as f64;
    let mut total = 0.0;
    let mut below_pow = 0.0;
    let mut start = 0;
    while start < m {
        let mut end = start + 1;
        while end < m && records[end].validation == records[start].validation {
            end += 1;
        }
        let upto_pow = if end == m {
            1.0
        } else {
            libm::pow(end as f64 / mf, nf)
        };
        let group_weight = upto_pow - below_pow;
        let group = &records[start..end];
        let group_mean = group.iter().map(|r| r.test).sum::<f64>() / group.len() as f64;
        total += group_weight * group_mean;
        below_pow = upto_pow;
        start = end;
    }
    total
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        Err(invalid_argument("n must be at least 1"))
    } else {
        Ok(())
    }
}

/// Non-parametric Boo(n): Boo(n) of the pool's empirical distribution.
pub fn boon_nonparametric(pool: &ResultPool, n: u32) -> Result<BoonEstimate> {
    check_n(n)?;
    validate_records(&pool.records)?;
    let m = pool.len();
    let mut scratch = pool.records.clone();
    let value = nonparametric_in_place(&mut scratch, pool.direction, n);
    let extrapolative = (m as u64) < n as u64;
    if extrapolative {
        log::warn!(
            "Boo({n}) estimated from only {m} runs; the estimate extrapolates beyond the pool"
        );
    }
    Ok(BoonEstimate {
        n,
        m,
        value,
        kind: EstimatorKind::Nonparametric,
        extrapolative,
    })
}

/// Fits a bivariate normal to the pool with sample means, Bessel-corrected
/// standard deviations and the Pearson correlation.
pub fn fit_gaussian(records: &[RunRecord]) -> Result<GaussianParams> {
    validate_records(records)?;
    if records.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: records.len(),
        });
    }
    let vals: Vec<f64> = records.iter().map(|r| r.validation).collect();
    let tests: Vec<f64> = records.iter().map(|r| r.test).collect();
    let sigma_val = descriptive::sample_std_dev(&vals).unwrap_or(0.0);
    let sigma_test = descriptive::sample_std_dev(&tests).unwrap_or(0.0);
    if !(sigma_val > 0.0) {
        return Err(Error::DegeneratePool {
            axis: Axis::Validation,
        });
    }
    if !(sigma_test > 0.0) {
        return Err(Error::DegeneratePool { axis: Axis::Test });
    }
    let rho =
        descriptive::pearson(&vals, &tests).ok_or(Error::DegeneratePool { axis: Axis::Test })?;
    GaussianParams::new(
        descriptive::mean(&vals),
        descriptive::mean(&tests),
        sigma_val,
        sigma_test,
        rho,
    )
}

/// `μ_test ± ρ σ_test Ē_n` for a fitted model, with the sign given by `direction`.
pub(crate) fn parametric_value(
    params: &GaussianParams,
    direction: Direction,
    coefficient: f64,
) -> f64 {
    params.mu_test() + direction.sign() * params.rho() * params.sigma_test() * coefficient
}

/// Gaussian parametric Boo(n) from fitted mean, standard deviation and correlation.
///
/// For minimized metrics the scores are negated before fitting and the result
/// negated back, which leaves `ρ̂` and `σ̂` unchanged and flips the sign of the
/// correction term.
pub fn boon_parametric_gaussian(pool: &ResultPool, n: u32) -> Result<BoonEstimate> {
    check_n(n)?;
    let params = fit_gaussian(&pool.records)?;
    let coefficient = std_normal_expected_max(n)?;
    let value = parametric_value(&params, pool.direction, coefficient);
    let m = pool.len();
    let extrapolative = (m as u64) < n as u64;
    if extrapolative {
        log::warn!(
            "Boo({n}) estimated from only {m} runs; the estimate extrapolates beyond the pool"
        );
    }
    Ok(BoonEstimate {
        n,
        m,
        value,
        kind: EstimatorKind::GaussianParametric,
        extrapolative,
    })
}

/// Dispatches on `kind`.
pub fn boon(pool: &ResultPool, n: u32, kind: EstimatorKind) -> Result<BoonEstimate> {
    match kind {
        EstimatorKind::Nonparametric => boon_nonparametric(pool, n),
        EstimatorKind::GaussianParametric => boon_parametric_gaussian(pool, n),
    }
}

#[cfg(test)]
mod tests;
