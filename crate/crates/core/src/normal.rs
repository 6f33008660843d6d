//! Standard normal distribution function.

use core::f64::consts::FRAC_1_SQRT_2;

/// `Phi(x) = erfc(-x / sqrt 2) / 2`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}
