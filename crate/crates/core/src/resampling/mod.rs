//! Resampling-based uncertainty: bootstrap and smoothed-bootstrap percentile
//! intervals, parametric Monte Carlo intervals, best-of-m curves and
//! two-pool comparisons.
//!
//! Replicate `r` always draws from its own random stream derived from the
//! master seed and `r`, and results are collected into slots indexed by `r`.
//! Serial and parallel runs therefore produce bit-identical output.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::distributions::GaussianParams;
use crate::error::{invalid_argument, Error, Result};
use crate::estimators::descriptive::{quantile_sorted, sample_std_dev};
use crate::estimators::{
    boon_nonparametric, validate_records, Direction, EstimatorKind, ResultPool, RunRecord,
};
use crate::rng::{stream, Domain, StreamRng};

mod curve;
pub mod statistic;

pub use curve::{best_of_m_curve, CurveOptions, CurvePoint};
pub use statistic::{BestSingleModel, Boon, Statistic, TestMean};

pub const MIN_REPLICATES: usize = 100;

/// Kernel bandwidth for the smoothed bootstrap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    /// Per axis `σ̂ · m^(-1/6)`.
    Auto,
    /// The same bandwidth on both axes.
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResamplingConfig {
    pub replicates: usize,
    pub level: f64,
    pub seed: u64,
    pub bandwidth: Bandwidth,
    /// Size of each resample; the pool size when `None`.
    pub resample_size: Option<usize>,
    /// Evaluate replicates on the rayon pool. Has no effect on results.
    pub parallel: bool,
}

impl Default for ResamplingConfig {
    fn default() -> Self {
        Self {
            replicates: 10_000,
            level: 0.95,
            seed: 0,
            bandwidth: Bandwidth::Auto,
            resample_size: None,
            parallel: true,
        }
    }
}

impl ResamplingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates < MIN_REPLICATES {
            return Err(invalid_argument(alloc::format!(
                "at least {MIN_REPLICATES} replicates are required, got {}",
                self.replicates
            )));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(invalid_argument("confidence level must lie in (0, 1)"));
        }
        if let Bandwidth::Fixed(h) = self.bandwidth {
            if !(h >= 0.0) || !h.is_finite() {
                return Err(invalid_argument(
                    "bandwidth must be a finite non-negative number",
                ));
            }
        }
        if self.resample_size == Some(0) {
            return Err(invalid_argument("resample size must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntervalMethod {
    Bootstrap,
    SmoothedBootstrap,
    MonteCarloGaussian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    pub lo: f64,
    pub hi: f64,
    pub level: f64,
    pub method: IntervalMethod,
    pub replicates: usize,
}

impl ConfidenceInterval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Evaluates `replicate(r)` for `r in 0..count`, keeping results in index order.
pub(crate) fn run_indexed<T, F>(count: usize, parallel: bool, replicate: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "std")]
    if parallel {
        use rayon::prelude::*;
        return (0..count).into_par_iter().map(replicate).collect();
    }
    let _ = parallel;
    (0..count).map(replicate).collect()
}

struct Replicate {
    value: f64,
    failures: usize,
}

/// Runs `draw_and_evaluate` until it succeeds, re-drawing degenerate samples from
/// the same stream. Gives up once more than `budget` attempts failed.
fn replicate_with_retries<F>(
    budget: usize,
    mut draw_and_evaluate: F,
) -> core::result::Result<Replicate, usize>
where
    F: FnMut() -> Result<f64>,
{
    let mut failures = 0;
    loop {
        match draw_and_evaluate() {
            Ok(value) => return Ok(Replicate { value, failures }),
            Err(_) => {
                failures += 1;
                if failures > budget {
                    return Err(failures);
                }
            }
        }
    }
}

/// Collects replicate values, enforcing the 1% degenerate-draw budget.
fn collect_values<F>(config: &ResamplingConfig, replicate: F) -> Result<Vec<f64>>
where
    F: Fn(usize) -> core::result::Result<Replicate, usize> + Sync + Send,
{
    let budget = config.replicates / 100;
    let outcomes = run_indexed(config.replicates, config.parallel, replicate);
    let mut failures = 0usize;
    let mut values = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        match outcome {
            Ok(rep) => {
                failures += rep.failures;
                values.push(rep.value);
            }
            Err(f) => failures += f,
        }
    }
    if failures > budget || values.len() < config.replicates {
        return Err(Error::ResamplingDegenerate {
            failures,
            replicates: config.replicates,
        });
    }
    Ok(values)
}

/// Percentile interval of replicate values at `level`.
pub fn percentile_interval(
    mut values: Vec<f64>,
    level: f64,
    method: IntervalMethod,
) -> ConfidenceInterval {
    values.sort_by(f64::total_cmp);
    let alpha = (1.0 - level) / 2.0;
    ConfidenceInterval {
        lo: quantile_sorted(&values, alpha),
        hi: quantile_sorted(&values, 1.0 - alpha),
        level,
        method,
        replicates: values.len(),
    }
}

/// Fills `out` with a with-replacement resample of `records`, then perturbs each
/// score with Gaussian noise of the given per-axis bandwidth.
fn draw_resample(
    records: &[RunRecord],
    out: &mut Vec<RunRecord>,
    size: usize,
    h: (f64, f64),
    rng: &mut StreamRng,
) {
    out.clear();
    let m = records.len();
    out.extend((0..size).map(|_| records[rng.random_range(0..m)]));
    if h.0 > 0.0 || h.1 > 0.0 {
        for r in out.iter_mut() {
            let zv: f64 = rng.sample(StandardNormal);
            let zt: f64 = rng.sample(StandardNormal);
            r.validation += h.0 * zv;
            r.test += h.1 * zt;
        }
    }
}

/// Per-axis kernel bandwidths for `pool` under `bandwidth`.
pub fn resolve_bandwidth(pool: &ResultPool, bandwidth: Bandwidth) -> (f64, f64) {
    match bandwidth {
        Bandwidth::Fixed(h) => (h, h),
        Bandwidth::Auto => {
            let factor = libm::pow(pool.len() as f64, -1.0 / 6.0);
            let sv = sample_std_dev(&pool.validations()).unwrap_or(0.0);
            let st = sample_std_dev(&pool.tests()).unwrap_or(0.0);
            (sv * factor, st * factor)
        }
    }
}

fn resampled_interval<S: Statistic + ?Sized>(
    pool: &ResultPool,
    statistic: &S,
    config: &ResamplingConfig,
    h: (f64, f64),
    method: IntervalMethod,
) -> Result<ConfidenceInterval> {
    config.validate()?;
    validate_records(pool.records())?;
    if pool.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: pool.len(),
        });
    }
    let size = config.resample_size.unwrap_or(pool.len());
    let budget = config.replicates / 100;
    let records = pool.records();
    let direction = pool.direction();
    let values = collect_values(config, |r| {
        let mut rng = stream(config.seed, Domain::Bootstrap, r as u64);
        let mut buf = Vec::with_capacity(size);
        replicate_with_retries(budget, || {
            draw_resample(records, &mut buf, size, h, &mut rng);
            statistic.evaluate(&mut buf, direction)
        })
    })?;
    Ok(percentile_interval(values, config.level, method))
}

/// Percentile bootstrap interval of `statistic` over with-replacement resamples of `pool`.
pub fn bootstrap_ci<S: Statistic + ?Sized>(
    pool: &ResultPool,
    statistic: &S,
    config: &ResamplingConfig,
) -> Result<ConfidenceInterval> {
    resampled_interval(
        pool,
        statistic,
        config,
        (0.0, 0.0),
        IntervalMethod::Bootstrap,
    )
}

/// Bootstrap whose resampled records receive additive Gaussian kernel noise on
/// both axes. With zero bandwidth it reproduces [`bootstrap_ci`] replicate for
/// replicate.
pub fn smoothed_bootstrap_ci<S: Statistic + ?Sized>(
    pool: &ResultPool,
    statistic: &S,
    config: &ResamplingConfig,
) -> Result<ConfidenceInterval> {
    config.validate()?;
    let h = resolve_bandwidth(pool, config.bandwidth);
    resampled_interval(
        pool,
        statistic,
        config,
        h,
        IntervalMethod::SmoothedBootstrap,
    )
}

/// Draws one `(validation, test)` pair from the bivariate normal.
pub(crate) fn draw_bivariate(params: &GaussianParams, rng: &mut StreamRng) -> RunRecord {
    let z1: f64 = rng.sample(StandardNormal);
    let z2: f64 = rng.sample(StandardNormal);
    let rho = params.rho();
    let resid = libm::sqrt((1.0 - rho * rho).max(0.0));
    RunRecord::new(
        params.mu_val() + params.sigma_val() * z1,
        params.mu_test() + params.sigma_test() * (rho * z1 + resid * z2),
    )
}

/// Sampling distribution of a Boo(n) estimator at pool size `m` when the pool
/// is drawn from a known bivariate normal; returns its percentile interval.
pub fn monte_carlo_ci_gaussian(
    params: &GaussianParams,
    m: usize,
    n: u32,
    kind: EstimatorKind,
    direction: Direction,
    config: &ResamplingConfig,
) -> Result<ConfidenceInterval> {
    config.validate()?;
    let needed = match kind {
        EstimatorKind::Nonparametric => 1,
        EstimatorKind::GaussianParametric => 3,
    };
    if m < needed {
        return Err(Error::InsufficientData { needed, got: m });
    }
    let statistic = Boon::new(n, kind)?;
    let budget = config.replicates / 100;
    let values = collect_values(config, |r| {
        let mut rng = stream(config.seed, Domain::MonteCarlo, r as u64);
        let mut buf = Vec::with_capacity(m);
        replicate_with_retries(budget, || {
            buf.clear();
            buf.extend((0..m).map(|_| draw_bivariate(params, &mut rng)));
            statistic.evaluate(&mut buf, direction)
        })
    })?;
    Ok(percentile_interval(
        values,
        config.level,
        IntervalMethod::MonteCarloGaussian,
    ))
}

/// Boo(n) difference between two architectures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub boon_a: f64,
    pub boon_b: f64,
    /// `boon_b - boon_a`
    pub delta: f64,
    pub ci: ConfidenceInterval,
    /// Zero lies outside the interval.
    pub significant: bool,
}

/// Non-parametric Boo(n) of `pool_b` minus that of `pool_a`, with a bootstrap
/// interval from resampling both pools independently in every replicate.
pub fn compare_architectures(
    pool_a: &ResultPool,
    pool_b: &ResultPool,
    n: u32,
    config: &ResamplingConfig,
) -> Result<Comparison> {
    config.validate()?;
    if pool_a.direction() != pool_b.direction() {
        return Err(invalid_argument(
            "pools are optimized in different directions",
        ));
    }
    let boon_a = boon_nonparametric(pool_a, n)?.value;
    let boon_b = boon_nonparametric(pool_b, n)?.value;
    let statistic = Boon::new(n, EstimatorKind::Nonparametric)?;
    let direction = pool_a.direction();
    let (a, b) = (pool_a.records(), pool_b.records());
    let values = collect_values(config, |r| {
        let mut rng_a = stream(config.seed, Domain::CompareFirst, r as u64);
        let mut rng_b = stream(config.seed, Domain::CompareSecond, r as u64);
        let mut buf_a = Vec::with_capacity(a.len());
        let mut buf_b = Vec::with_capacity(b.len());
        replicate_with_retries(0, || {
            draw_resample(a, &mut buf_a, a.len(), (0.0, 0.0), &mut rng_a);
            draw_resample(b, &mut buf_b, b.len(), (0.0, 0.0), &mut rng_b);
            Ok(statistic.evaluate(&mut buf_b, direction)?
                - statistic.evaluate(&mut buf_a, direction)?)
        })
    })?;
    let ci = percentile_interval(values, config.level, IntervalMethod::Bootstrap);
    Ok(Comparison {
        boon_a,
        boon_b,
        delta: boon_b - boon_a,
        significant: !ci.contains(0.0),
        ci,
    })
}
