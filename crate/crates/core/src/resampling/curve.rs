//! Expected best-validation test score as a function of the number of runs.

use alloc::vec::Vec;

use rand::Rng;

use super::statistic::BestSingleModel;
use super::{run_indexed, smoothed_bootstrap_ci, ConfidenceInterval, ResamplingConfig};
use crate::error::{invalid_argument, Result};
use crate::estimators::{validate_records, ResultPool, RunRecord};
use crate::rng::{stream, Domain};

/// Samples per random stream; blocks are reduced in index order.
const BLOCK: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct CurveOptions {
    pub samples_per_m: usize,
    /// Draw each sample of size `m` with replacement (the default). Without
    /// replacement requires `m <= pool size`.
    pub with_replacement: bool,
    /// Attach a smoothed-bootstrap band for the best single model at each `m`.
    pub band: bool,
}

impl Default for CurveOptions {
    fn default() -> Self {
        Self {
            samples_per_m: 100_000,
            with_replacement: true,
            band: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub m: usize,
    pub expected_best_test: f64,
    /// Monte Carlo standard error of `expected_best_test`.
    pub std_error: f64,
    pub ci: Option<ConfidenceInterval>,
}

#[derive(Clone, Copy)]
struct Moments {
    count: usize,
    sum: f64,
    sum_sq: f64,
}

/// For each `m`, the mean test score of the best-validation record over
/// `samples_per_m` random samples of size `m` drawn from the pool.
pub fn best_of_m_curve(
    pool: &ResultPool,
    m_values: &[usize],
    options: &CurveOptions,
    config: &ResamplingConfig,
) -> Result<Vec<CurvePoint>> {
    if m_values.is_empty() {
        return Err(invalid_argument("no pool sizes requested"));
    }
    if options.samples_per_m == 0 {
        return Err(invalid_argument("samples_per_m must be positive"));
    }
    validate_records(pool.records())?;
    for &m in m_values {
        if m == 0 {
            return Err(invalid_argument("pool sizes must be positive"));
        }
        if !options.with_replacement && m > pool.len() {
            return Err(invalid_argument(alloc::format!(
                "cannot draw {m} runs without replacement from a pool of {}",
                pool.len()
            )));
        }
    }
    if options.band {
        config.validate()?;
    }

    let records = pool.records();
    let direction = pool.direction();
    // shift keeps the running sum of squares well conditioned
    let shift = records.iter().map(|r| r.test).sum::<f64>() / records.len() as f64;
    let blocks = options.samples_per_m.div_ceil(BLOCK);

    let mut points = Vec::with_capacity(m_values.len());
    for (k, &m) in m_values.iter().enumerate() {
        let partials = run_indexed(blocks, config.parallel, |b| {
            let count = BLOCK.min(options.samples_per_m - b * BLOCK);
            let mut rng = stream(config.seed, Domain::Curve, ((k as u64) << 32) | b as u64);
            let mut sample: Vec<RunRecord> = Vec::with_capacity(m);
            let mut acc = Moments {
                count,
                sum: 0.0,
                sum_sq: 0.0,
            };
            for _ in 0..count {
                sample.clear();
                if options.with_replacement {
                    sample.extend((0..m).map(|_| records[rng.random_range(0..records.len())]));
                } else {
                    sample.extend(
                        rand::seq::index::sample(&mut rng, records.len(), m)
                            .iter()
                            .map(|i| records[i]),
                    );
                }
                let t = BestSingleModel::pick(&sample, direction).test - shift;
                acc.sum += t;
                acc.sum_sq += t * t;
            }
            acc
        });
        let total = partials.iter().fold(
            Moments {
                count: 0,
                sum: 0.0,
                sum_sq: 0.0,
            },
            |a, p| Moments {
                count: a.count + p.count,
                sum: a.sum + p.sum,
                sum_sq: a.sum_sq + p.sum_sq,
            },
        );
        let s = total.count as f64;
        let mean = total.sum / s;
        let var = if total.count > 1 {
            ((total.sum_sq - s * mean * mean) / (s - 1.0)).max(0.0)
        } else {
            0.0
        };
        let ci = if options.band {
            let cfg = ResamplingConfig {
                resample_size: Some(m),
                ..config.clone()
            };
            Some(smoothed_bootstrap_ci(pool, &BestSingleModel, &cfg)?)
        } else {
            None
        };
        points.push(CurvePoint {
            m,
            expected_best_test: mean + shift,
            std_error: libm::sqrt(var / s),
            ci,
        });
    }
    Ok(points)
}
