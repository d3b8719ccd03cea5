//! Statistics evaluated on resampled pools.

use crate::distributions::std_normal_expected_max;
use crate::error::{invalid_argument, Result};
use crate::estimators::{
    fit_gaussian, nonparametric_in_place, parametric_value, Direction, EstimatorKind, RunRecord,
};

/// A scalar computed from a (resampled) pool. Implementations may reorder the
/// slice they are given.
pub trait Statistic: Sync {
    fn evaluate(&self, records: &mut [RunRecord], direction: Direction) -> Result<f64>;
}

impl<F> Statistic for F
where
    F: Fn(&mut [RunRecord], Direction) -> Result<f64> + Sync,
{
    fn evaluate(&self, records: &mut [RunRecord], direction: Direction) -> Result<f64> {
        self(records, direction)
    }
}

/// Mean test score.
#[derive(Debug, Clone, Copy, Default)]
pub struct TestMean;

impl Statistic for TestMean {
    fn evaluate(&self, records: &mut [RunRecord], _direction: Direction) -> Result<f64> {
        Ok(records.iter().map(|r| r.test).sum::<f64>() / records.len() as f64)
    }
}

/// Boo(n) estimate with the standard-normal coefficient resolved up front.
#[derive(Debug, Clone, Copy)]
pub struct Boon {
    n: u32,
    kind: EstimatorKind,
    coefficient: f64,
}

impl Boon {
    pub fn new(n: u32, kind: EstimatorKind) -> Result<Self> {
        if n == 0 {
            return Err(invalid_argument("n must be at least 1"));
        }
        let coefficient = match kind {
            EstimatorKind::Nonparametric => 0.0,
            EstimatorKind::GaussianParametric => std_normal_expected_max(n)?,
        };
        Ok(Self {
            n,
            kind,
            coefficient,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn kind(&self) -> EstimatorKind {
        self.kind
    }
}

impl Statistic for Boon {
    fn evaluate(&self, records: &mut [RunRecord], direction: Direction) -> Result<f64> {
        match self.kind {
            EstimatorKind::Nonparametric => Ok(nonparametric_in_place(records, direction, self.n)),
            EstimatorKind::GaussianParametric => {
                let params = fit_gaussian(records)?;
                Ok(parametric_value(&params, direction, self.coefficient))
            }
        }
    }
}

/// Test score of the best-validation record ("best single model").
/// Validation ties go to the record with the better test score.
#[derive(Debug, Clone, Copy, Default)]
pub struct BestSingleModel;

impl BestSingleModel {
    pub(crate) fn pick(records: &[RunRecord], direction: Direction) -> RunRecord {
        *records
            .iter()
            .max_by(|a, b| direction.rank_order(a, b))
            .expect("non-empty resample")
    }
}

impl Statistic for BestSingleModel {
    fn evaluate(&self, records: &mut [RunRecord], direction: Direction) -> Result<f64> {
        Ok(Self::pick(records, direction).test)
    }
}
