use crate::error::{Error, Result};
use crate::special::std_normal_ln_cdf;

use super::descriptive::{mean, pearson, quantile_sorted, sample_std_dev, sorted_copy, spearman};
use super::ResultPool;

/// Descriptive statistics of a pool. Statistics that need more records than the
/// pool has are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoolSummary {
    pub m: usize,
    pub mean_test: f64,
    pub std_test: Option<f64>,
    pub iqr_test: Option<f64>,
    pub range_test: (f64, f64),
    pub mean_val: f64,
    pub std_val: Option<f64>,
    pub spearman_val_test: Option<f64>,
    pub pearson_val_test: Option<f64>,
}

pub fn summarize(pool: &ResultPool) -> PoolSummary {
    let tests = pool.tests();
    let vals = pool.validations();
    let m = tests.len();
    let sorted = sorted_copy(&tests);
    let (iqr_test, std_test) = if m >= 2 {
        (
            Some(quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25)),
            sample_std_dev(&tests),
        )
    } else {
        (None, None)
    };
    let (spearman_val_test, pearson_val_test) = if m >= 3 {
        (spearman(&vals, &tests), pearson(&vals, &tests))
    } else {
        (None, None)
    };
    PoolSummary {
        m,
        mean_test: mean(&tests),
        std_test,
        iqr_test,
        range_test: (sorted[0], sorted[m - 1]),
        mean_val: mean(&vals),
        std_val: sample_std_dev(&vals),
        spearman_val_test,
        pearson_val_test,
    }
}

/// Composite-hypothesis normality check (mean and variance estimated from the data).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AndersonDarling {
    /// Raw A².
    pub statistic: f64,
    /// A² with the small-sample factor `1 + 0.75/m + 2.25/m²`.
    pub adjusted: f64,
    pub critical_5pct: f64,
    pub reject_at_5pct: bool,
}

pub const AD_CRITICAL_5PCT: f64 = 0.752;

pub fn anderson_darling_normality(values: &[f64]) -> Result<AndersonDarling> {
    let m = values.len();
    if m < 8 {
        return Err(Error::InsufficientData { needed: 8, got: m });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(crate::error::invalid_argument("values must be finite"));
    }
    let sd = sample_std_dev(values).unwrap_or(0.0);
    if !(sd > 0.0) {
        return Err(Error::InsufficientData { needed: 2, got: 1 });
    }
    let mu = mean(values);
    let z: alloc::vec::Vec<f64> = sorted_copy(values).iter().map(|v| (v - mu) / sd).collect();
    let mf = m as f64;
    let mut acc = 0.0;
    for i in 0..m {
        // ln Φ(z_i) + ln(1 - Φ(z_{m+1-i}))
        let lower = std_normal_ln_cdf(z[i]);
        let upper = std_normal_ln_cdf(-z[m - 1 - i]);
        acc += (2 * i + 1) as f64 * (lower + upper);
    }
    let statistic = -mf - acc / mf;
    let adjusted = statistic * (1.0 + 0.75 / mf + 2.25 / (mf * mf));
    Ok(AndersonDarling {
        statistic,
        adjusted,
        critical_5pct: AD_CRITICAL_5PCT,
        reject_at_5pct: adjusted > AD_CRITICAL_5PCT,
    })
}
