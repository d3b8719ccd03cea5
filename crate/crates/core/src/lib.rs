//! Expected best-out-of-n (Boo(n)) performance of a training setup.
//!
//! Given a pool of `(validation, test)` scores from repeated training runs,
//! Boo(n) is the expected test score of the model that wins on validation
//! among `n` independent runs. This crate provides:
//!
//! - [`distributions`]: exact values for known distributions (numerical
//!   integration, exact discrete sums, Gaussian closed forms);
//! - [`estimators`]: the rank-weighted non-parametric estimator, the Gaussian
//!   parametric estimator and descriptive pool statistics;
//! - [`resampling`]: percentile and smoothed bootstrap intervals, parametric
//!   Monte Carlo intervals, best-of-m curves and pool comparisons.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature; `std` adds memoization of the standard-normal coefficients and
//! parallel replicate evaluation.
#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod distributions;
pub mod error;
pub mod estimators;
pub mod quadrature;
pub mod resampling;
mod rng;
pub mod special;

pub use distributions::{
    expected_max_continuous, expected_max_discrete, gaussian_boon_single, gaussian_boon_valtest,
    std_normal_expected_max, ContinuousDistribution, DiscreteDistribution, GaussianParams, Normal,
    Uniform,
};
pub use error::{Axis, Error, Result};
pub use estimators::{
    anderson_darling_normality, boon_nonparametric, boon_parametric_gaussian, fit_gaussian,
    summarize, AndersonDarling, BoonEstimate, Direction, EstimatorKind, PoolSummary, ResultPool,
    RunRecord,
};
pub use resampling::{
    best_of_m_curve, bootstrap_ci, compare_architectures, monte_carlo_ci_gaussian,
    smoothed_bootstrap_ci, Bandwidth, BestSingleModel, Boon, Comparison, ConfidenceInterval,
    CurveOptions, CurvePoint, IntervalMethod, ResamplingConfig, Statistic, TestMean,
};
