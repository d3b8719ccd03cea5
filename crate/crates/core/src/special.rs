//! Standard normal density and distribution function.

use core::f64::consts::{FRAC_1_SQRT_2, PI};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

pub fn std_normal_pdf(z: f64) -> f64 {
    libm::exp(-0.5 * z * z) / libm::sqrt(2.0 * PI)
}

pub fn std_normal_ln_pdf(z: f64) -> f64 {
    -0.5 * z * z - LN_SQRT_2PI
}

/// Φ(z), computed through `erfc` so the lower tail keeps full relative precision.
pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// ln Φ(z). Uses the asymptotic series where `erfc` would underflow.
pub fn std_normal_ln_cdf(z: f64) -> f64 {
    if z > -30.0 {
        let p = std_normal_cdf(z);
        if z > 0.0 {
            // ln(1 - Φ(-z)) keeps precision near 1.
            libm::log1p(-std_normal_cdf(-z))
        } else {
            libm::log(p)
        }
    } else {
        // Mills ratio: Φ(z) ≈ φ(z)/|z| · (1 - 1/z² + 3/z⁴ - 15/z⁶)
        let z2 = z * z;
        let series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
        std_normal_ln_pdf(z) - libm::log(-z) + libm::log(series)
    }
}
