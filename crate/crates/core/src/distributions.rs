//! Expected maximum of `n` i.i.d. draws from a known performance distribution.
//!
//! Continuous distributions are integrated numerically, discrete ones are summed
//! exactly, and Gaussians reduce to `μ + σ·Ē_n(N(0,1))` where the standard-normal
//! coefficient is computed once per `n`.

use alloc::vec::Vec;

use crate::error::{invalid_argument, Error, Result};
use crate::quadrature::{integrate, Tolerance};
use crate::special::{std_normal_cdf, std_normal_ln_cdf, std_normal_ln_pdf, std_normal_pdf};

/// Gaussian tails beyond this many standard deviations carry < 1e-30 mass.
const GAUSSIAN_TRUNCATION: f64 = 12.0;
const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// A univariate distribution given by its density and distribution function.
pub trait ContinuousDistribution {
    fn pdf(&self, x: f64) -> f64;
    fn cdf(&self, x: f64) -> f64;
    /// Bounds of the support; either may be infinite.
    fn support(&self) -> (f64, f64);

    fn ln_pdf(&self, x: f64) -> f64 {
        libm::log(self.pdf(x))
    }

    fn ln_cdf(&self, x: f64) -> f64 {
        libm::log(self.cdf(x))
    }

    /// Range actually handed to the integrator. Defaults to the support.
    fn integration_range(&self) -> (f64, f64) {
        self.support()
    }
}

impl<D: ContinuousDistribution + ?Sized> ContinuousDistribution for &D {
    fn pdf(&self, x: f64) -> f64 {
        (**self).pdf(x)
    }
    fn cdf(&self, x: f64) -> f64 {
        (**self).cdf(x)
    }
    fn support(&self) -> (f64, f64) {
        (**self).support()
    }
    fn ln_pdf(&self, x: f64) -> f64 {
        (**self).ln_pdf(x)
    }
    fn ln_cdf(&self, x: f64) -> f64 {
        (**self).ln_cdf(x)
    }
    fn integration_range(&self) -> (f64, f64) {
        (**self).integration_range()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normal {
    mean: f64,
    std_dev: f64,
}

impl Normal {
    pub const STANDARD: Normal = Normal {
        mean: 0.0,
        std_dev: 1.0,
    };

    pub fn new(mean: f64, std_dev: f64) -> Result<Self> {
        if !mean.is_finite() || !std_dev.is_finite() || std_dev <= 0.0 {
            return Err(invalid_argument(
                "normal distribution needs a finite mean and std_dev > 0",
            ));
        }
        Ok(Self { mean, std_dev })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn std_dev(&self) -> f64 {
        self.std_dev
    }

    fn z(&self, x: f64) -> f64 {
        (x - self.mean) / self.std_dev
    }
}

impl ContinuousDistribution for Normal {
    fn pdf(&self, x: f64) -> f64 {
        std_normal_pdf(self.z(x)) / self.std_dev
    }
    fn cdf(&self, x: f64) -> f64 {
        std_normal_cdf(self.z(x))
    }
    fn support(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
    fn ln_pdf(&self, x: f64) -> f64 {
        std_normal_ln_pdf(self.z(x)) - libm::log(self.std_dev)
    }
    fn ln_cdf(&self, x: f64) -> f64 {
        std_normal_ln_cdf(self.z(x))
    }
    fn integration_range(&self) -> (f64, f64) {
        let w = GAUSSIAN_TRUNCATION * self.std_dev;
        (self.mean - w, self.mean + w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uniform {
    lo: f64,
    hi: f64,
}

impl Uniform {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(invalid_argument(
                "uniform distribution needs finite lo < hi",
            ));
        }
        Ok(Self { lo, hi })
    }
}

impl ContinuousDistribution for Uniform {
    fn pdf(&self, x: f64) -> f64 {
        if x < self.lo || x > self.hi {
            0.0
        } else {
            1.0 / (self.hi - self.lo)
        }
    }
    fn cdf(&self, x: f64) -> f64 {
        ((x - self.lo) / (self.hi - self.lo)).clamp(0.0, 1.0)
    }
    fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
}

/// A distribution assembled from caller-supplied density and distribution functions.
pub struct FnDistribution<P, C> {
    pub pdf: P,
    pub cdf: C,
    pub support_lo: f64,
    pub support_hi: f64,
}

impl<P, C> ContinuousDistribution for FnDistribution<P, C>
where
    P: Fn(f64) -> f64,
    C: Fn(f64) -> f64,
{
    fn pdf(&self, x: f64) -> f64 {
        (self.pdf)(x)
    }
    fn cdf(&self, x: f64) -> f64 {
        (self.cdf)(x)
    }
    fn support(&self) -> (f64, f64) {
        (self.support_lo, self.support_hi)
    }
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        Err(invalid_argument("n must be at least 1"))
    } else {
        Ok(())
    }
}

/// `∫ x · n f(x) F(x)^(n-1) dx` over the support.
///
/// The density of the maximum is evaluated as `n · exp(ln f + (n-1) ln F)` so
/// that `F^(n-1)` does not underflow for large `n`.
pub fn expected_max_continuous<D>(dist: &D, n: u32) -> Result<f64>
where
    D: ContinuousDistribution + ?Sized,
{
    check_n(n)?;
    let (lo, hi) = dist.support();
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::InvalidDistribution(
            "support must satisfy lo < hi".into(),
        ));
    }
    let at_lo = dist.cdf(lo);
    let at_hi = dist.cdf(hi);
    if !(at_lo.abs() <= NORMALIZATION_TOLERANCE)
        || !((at_hi - 1.0).abs() <= NORMALIZATION_TOLERANCE)
    {
        return Err(Error::InvalidDistribution(alloc::format!(
            "cdf is not normalized: cdf(lo) = {at_lo}, cdf(hi) = {at_hi}"
        )));
    }

    let (a, b) = dist.integration_range();
    let nf = n as f64;
    let max_density = |x: f64| {
        let ln_f = dist.ln_pdf(x);
        if ln_f == f64::NEG_INFINITY || ln_f.is_nan() {
            return 0.0;
        }
        let ln_tail = if n == 1 {
            0.0
        } else {
            (nf - 1.0) * dist.ln_cdf(x)
        };
        nf * libm::exp(ln_f + ln_tail)
    };
    let integral = integrate(|x| x * max_density(x), a, b, Tolerance::default())?;
    Ok(integral.value.clamp(lo, hi))
}

fn std_normal_expected_max_uncached(n: u32) -> f64 {
    expected_max_continuous(&Normal::STANDARD, n).expect("standard normal is a valid distribution")
}

#[cfg(feature = "std")]
fn cached(n: u32) -> f64 {
    use std::collections::BTreeMap;
    use std::sync::Mutex;

    static CACHE: Mutex<BTreeMap<u32, f64>> = Mutex::new(BTreeMap::new());
    if let Some(&v) = CACHE.lock().unwrap_or_else(|e| e.into_inner()).get(&n) {
        return v;
    }
    let v = std_normal_expected_max_uncached(n);
    CACHE.lock().unwrap_or_else(|e| e.into_inner()).insert(n, v);
    v
}

#[cfg(not(feature = "std"))]
fn cached(n: u32) -> f64 {
    std_normal_expected_max_uncached(n)
}

/// `Ē_n(N(0,1))`, the expected maximum of `n` standard normal draws.
pub fn std_normal_expected_max(n: u32) -> Result<f64> {
    check_n(n)?;
    Ok(cached(n))
}

/// Finite distribution over distinct values.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    // sorted by value
    atoms: Vec<(f64, f64)>,
}

impl DiscreteDistribution {
    pub fn new(mut atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(invalid_argument(
                "discrete distribution needs at least one atom",
            ));
        }
        for &(x, p) in &atoms {
            if !x.is_finite() {
                return Err(Error::InvalidDistribution(
                    "atom values must be finite".into(),
                ));
            }
            if !(p > 0.0) || !p.is_finite() {
                return Err(Error::InvalidDistribution(
                    "atom weights must be positive".into(),
                ));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(alloc::format!(
                "atom weights sum to {total}, expected 1"
            )));
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        if atoms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidDistribution(
                "atom values must be distinct".into(),
            ));
        }
        Ok(Self { atoms })
    }

    /// Equal weight on each of the given distinct values.
    pub fn uniform(values: &[f64]) -> Result<Self> {
        let p = 1.0 / values.len() as f64;
        Self::new(values.iter().map(|&v| (v, p)).collect())
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|&(x, p)| x * p).sum()
    }
}

/// `Σ_i (P[X ≤ x_i]^n − P[X < x_i]^n) · x_i`, summed exactly over the atoms.
pub fn expected_max_discrete(dist: &DiscreteDistribution, n: u32) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    let mut below = 0.0_f64;
    let mut below_pow = 0.0_f64;
    let mut total = 0.0;
    for &(x, p) in &dist.atoms {
        let upto = below + p;
        let upto_pow = libm::pow(upto, nf);
        total += (upto_pow - below_pow) * x;
        below = upto;
        below_pow = upto_pow;
    }
    let (lo, hi) = (dist.atoms[0].0, dist.atoms[dist.atoms.len() - 1].0);
    Ok(total.clamp(lo, hi))
}

/// Bivariate normal model of (validation, test) scores.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    mu_val: f64,
    mu_test: f64,
    sigma_val: f64,
    sigma_test: f64,
    rho: f64,
}

impl GaussianParams {
    pub fn new(
        mu_val: f64,
        mu_test: f64,
        sigma_val: f64,
        sigma_test: f64,
        rho: f64,
    ) -> Result<Self> {
        let finite = [mu_val, mu_test, sigma_val, sigma_test, rho]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(invalid_argument("gaussian parameters must be finite"));
        }
        if sigma_val <= 0.0 || sigma_test <= 0.0 {
            return Err(invalid_argument(
                "sigma_val and sigma_test must be positive",
            ));
        }
        if rho.abs() > 1.0 {
            return Err(invalid_argument("rho must lie in [-1, 1]"));
        }
        Ok(Self {
            mu_val,
            mu_test,
            sigma_val,
            sigma_test,
            rho,
        })
    }

    pub fn mu_val(&self) -> f64 {
        self.mu_val
    }
    pub fn mu_test(&self) -> f64 {
        self.mu_test
    }
    pub fn sigma_val(&self) -> f64 {
        self.sigma_val
    }
    pub fn sigma_test(&self) -> f64 {
        self.sigma_test
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `E[X_test | X_val = x_val]`.
    pub fn conditional_test_mean(&self, x_val: f64) -> f64 {
        self.mu_test + self.rho * self.sigma_test / self.sigma_val * (x_val - self.mu_val)
    }

    pub fn validation_marginal(&self) -> Normal {
        Normal {
            mean: self.mu_val,
            std_dev: self.sigma_val,
        }
    }
}

/// Expected maximum of `n` draws from `N(mu, sigma²)`.
pub fn gaussian_boon_single(mu: f64, sigma: f64, n: u32) -> Result<f64> {
    if !(sigma >= 0.0) || !sigma.is_finite() || !mu.is_finite() {
        return Err(invalid_argument("need finite mu and sigma >= 0"));
    }
    Ok(mu + sigma * std_normal_expected_max(n)?)
}

/// Expected test score of the best-validation draw out of `n`.
pub fn gaussian_boon_valtest(params: &GaussianParams, n: u32) -> Result<f64> {
    Ok(params.mu_test + params.rho * params.sigma_test * std_normal_expected_max(n)?)
}
