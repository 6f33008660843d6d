//! Adaptive Simpson quadrature for real- and complex-valued integrands.

use core::ops::{Add, Mul, Sub};
use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Default absolute tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default cap on the number of accepted subintervals.
pub const DEFAULT_MAX_INTERVALS: usize = 1 << 16;
const MAX_DEPTH: u32 = 60;
const INITIAL_PANELS: usize = 16;

/// Values that can be integrated: a vector space over `f64` with a norm.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    /// Sum of the local Richardson error estimates.
    pub error_estimate: f64,
    pub intervals: usize,
    /// False when the interval budget ran out before every panel met its tolerance.
    pub converged: bool,
}

struct Panel<T> {
    a: f64,
    b: f64,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: f64,
    depth: u32,
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// The interval is first split into 16 panels; each panel is refined
/// recursively with the classic `|S2 - S1| <= 15 tol` acceptance test.
/// At most `max_intervals` subintervals are accepted.
pub fn adaptive_simpson<T, F>(mut f: F, a: f64, b: f64, tol: f64, max_intervals: usize) -> Result<Quadrature<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    if !(tol > 0.0) {
        return Err(invalid("tol", "quadrature tolerance must be positive"));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(invalid("interval", "integration bounds must be finite"));
    }
    if a == b {
        return Ok(Quadrature { value: T::zero(), error_estimate: 0.0, intervals: 0, converged: true });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    let panels = INITIAL_PANELS;
    let width = (hi - lo) / panels as f64;
    let mut stack = alloc::vec::Vec::with_capacity(2 * MAX_DEPTH as usize + panels);
    let mut left = f(lo);
    for p in 0..panels {
        let pa = lo + width * p as f64;
        let pb = if p + 1 == panels { hi } else { lo + width * (p + 1) as f64 };
        let fm = f(0.5 * (pa + pb));
        let fb = f(pb);
        let whole = simpson(pa, pb, left, fm, fb);
        stack.push(Panel { a: pa, b: pb, fa: left, fm, fb, whole, tol: tol / panels as f64, depth: 0 });
        left = fb;
    }
    // process left to right for a deterministic summation order
    stack.reverse();

    let mut value = T::zero();
    let mut error_estimate = 0.0;
    let mut intervals = 0usize;
    let mut converged = true;
    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let flm = f(0.5 * (p.a + m));
        let frm = f(0.5 * (m + p.b));
        let sl = simpson(p.a, m, p.fa, flm, p.fm);
        let sr = simpson(m, p.b, p.fm, frm, p.fb);
        let diff = sl + sr - p.whole;
        let err = diff.magnitude() / 15.0;
        let budget_left = intervals + stack.len() + 2 <= max_intervals;
        if err <= p.tol || p.depth >= MAX_DEPTH || !budget_left || m <= p.a || m >= p.b {
            if err > p.tol {
                converged = false;
            }
            value = value + sl + sr + diff * (1.0 / 15.0);
            error_estimate += err;
            intervals += 1;
        } else {
            let half = 0.5 * p.tol;
            stack.push(Panel { a: m, b: p.b, fa: p.fm, fm: frm, fb: p.fb, whole: sr, tol: half, depth: p.depth + 1 });
            stack.push(Panel { a: p.a, b: m, fa: p.fa, fm: flm, fb: p.fm, whole: sl, tol: half, depth: p.depth + 1 });
        }
    }
    Ok(Quadrature { value: value * sign, error_estimate, intervals, converged })
}

#[inline]
fn simpson<T: QuadValue>(a: f64, b: f64, fa: T, fm: T, fb: T) -> T {
    (fa + fm * 4.0 + fb) * ((b - a) / 6.0)
}

/// Shorthand for [`adaptive_simpson`] with the default interval cap, returning the value.
pub fn integrate<T, F>(f: F, a: f64, b: f64, tol: f64) -> Result<T>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    adaptive_simpson(f, a, b, tol, DEFAULT_MAX_INTERVALS).map(|q| q.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn polynomial_is_exact() {
        let q = adaptive_simpson(|x: f64| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12, DEFAULT_MAX_INTERVALS).unwrap();
        assert_abs_diff_eq!(q.value, 0.0, epsilon = 1e-14);
        assert!(q.converged);
    }

    #[test]
    fn smooth_and_kinked_integrands() {
        let v: f64 = integrate(|x: f64| x.exp(), 0.0, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(v, core::f64::consts::E - 1.0, epsilon = 1e-12);
        let v: f64 = integrate(|x: f64| (x - 0.3).abs(), 0.0, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(v, 0.5 * (0.09 + 0.49), epsilon = 1e-12);
        let v: f64 = integrate(|x: f64| x.sin(), core::f64::consts::PI, 0.0, 1e-12).unwrap();
        assert_abs_diff_eq!(v, -2.0, epsilon = 1e-12);
    }

    #[test]
    fn complex_integrand() {
        // int_0^1 e^{i 5 u} du = (e^{5i} - 1) / (5i)
        let v: Complex64 = integrate(|u: f64| Complex64::new(0.0, 5.0 * u).exp(), 0.0, 1.0, 1e-12).unwrap();
        let expect = (Complex64::new(0.0, 5.0).exp() - 1.0) / Complex64::new(0.0, 5.0);
        assert!((v - expect).norm() < 1e-12);
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(integrate(|x: f64| x, 0.0, 1.0, 0.0).is_err());
        assert!(integrate(|x: f64| x, 0.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let q = adaptive_simpson(|x: f64| (1.0 / x.max(1e-300)).sin(), 0.0, 1.0, 1e-14, 64).unwrap();
        assert!(!q.converged);
        assert!(q.intervals <= 64);
    }
}
