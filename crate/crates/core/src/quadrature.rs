//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Infinite endpoints are mapped onto finite intervals before integration, so
//! callers may pass `f64::INFINITY` / `f64::NEG_INFINITY` directly. Subdivision
//! always bisects the interval with the largest error estimate, which makes the
//! result a deterministic function of the integrand and tolerances.

use alloc::vec::Vec;

use crate::error::{invalid_argument, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-11,
            rel: 1e-11,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kron += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kron * half;
    let error = ((kron - gauss) * half).abs();
    Segment {
        lo,
        hi,
        value,
        error,
    }
}

fn adapt<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: Tolerance) -> Integral {
    let mut segments: Vec<Segment> = Vec::with_capacity(64);
    segments.push(kronrod(f, lo, hi));
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if error <= tol.abs.max(tol.rel * value.abs()) || segments.len() >= tol.max_intervals {
            return Integral { value, error };
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .expect("at least one segment");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.lo + seg.hi);
        if mid <= seg.lo || mid >= seg.hi {
            // Interval cannot be split further in floating point.
            segments.push(seg);
            let value = segments.iter().map(|s| s.value).sum();
            let error = segments.iter().map(|s| s.error).sum();
            return Integral { value, error };
        }
        segments.push(kronrod(f, seg.lo, mid));
        segments.push(kronrod(f, mid, seg.hi));
    }
}

/// Integrates `f` over `[lo, hi]`; either bound may be infinite.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: Tolerance) -> Result<Integral> {
    if lo.is_nan() || hi.is_nan() {
        return Err(invalid_argument("integration bounds must not be NaN"));
    }
    if lo > hi {
        return Err(invalid_argument("integration bounds are reversed"));
    }
    if lo == hi {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
        });
    }
    let out = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => adapt(&f, lo, hi, tol),
        (false, false) => {
            // x = t / (1 - t²)
            let g = |t: f64| {
                let d = 1.0 - t * t;
                let x = t / d;
                let jac = (1.0 + t * t) / (d * d);
                f(x) * jac
            };
            adapt(&g, -1.0, 1.0, tol)
        }
        (true, false) => {
            // x = lo + t / (1 - t)
            let g = |t: f64| {
                let d = 1.0 - t;
                f(lo + t / d) / (d * d)
            };
            adapt(&g, 0.0, 1.0, tol)
        }
        (false, true) => {
            // x = hi - (1 - t) / t
            let g = |t: f64| f(hi - (1.0 - t) / t) / (t * t);
            adapt(&g, 0.0, 1.0, tol)
        }
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(
            |x| x * x * x - 2.0 * x + 1.0,
            -1.0,
            2.0,
            Tolerance::default(),
        )
        .unwrap();
        // ∫ = [x⁴/4 - x² + x] from -1 to 2 = (4 - 4 + 2) - (0.25 - 1 - 1)
        assert!((r.value - 3.75).abs() < 1e-13);
    }

    #[test]
    fn gaussian_over_the_real_line() {
        let r = integrate(
            |x| libm::exp(-x * x),
            f64::NEG_INFINITY,
            f64::INFINITY,
            Tolerance::default(),
        )
        .unwrap();
        assert!((r.value - PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn half_infinite_intervals() {
        let right = integrate(|x| libm::exp(-x), 0.0, f64::INFINITY, Tolerance::default()).unwrap();
        assert!((right.value - 1.0).abs() < 1e-10);
        let left = integrate(libm::exp, f64::NEG_INFINITY, 1.0, Tolerance::default()).unwrap();
        assert!((left.value - core::f64::consts::E).abs() < 1e-9);
    }

    #[test]
    fn sharp_peak_is_resolved() {
        let r = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, Tolerance::default()).unwrap();
        let exact = 2.0 * 100.0 * libm::atan(100.0);
        assert!((r.value - exact).abs() / exact < 1e-9);
    }

    #[test]
    fn degenerate_and_reversed_bounds() {
        assert_eq!(
            integrate(|x| x, 1.0, 1.0, Tolerance::default())
                .unwrap()
                .value,
            0.0
        );
        assert!(integrate(|x| x, 2.0, 1.0, Tolerance::default()).is_err());
    }
}
