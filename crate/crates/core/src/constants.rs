//! Scalar constants, the constant pipeline behind the main error bound, and the
//! bounds on the Kolmogorov distance built from it.

use alloc::format;
use alloc::vec::Vec;
// inherent float methods are std-only; unused when std is linked in (tests)
use core::f64::consts::{E, PI};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dist::{enumerate_distribution, kolmogorov_distance};
use crate::error::{invalid, Result};
use crate::matrix::ScoreMatrix;
use crate::perm::factorial_f64;
use crate::permanent::charfn;
use crate::quad::{adaptive_simpson, integrate, DEFAULT_MAX_INTERVALS};
use crate::stats::{center, gamma, CenteredStats, SamplingModel};

/// `sup_x (cos x - 1 + x^2/2) / |x|^3`, as returned by [`kappa`].
pub const KAPPA: f64 = 0.099_161_913_514_771_86;
/// Published value of `C1`.
pub const ROUNDED_C1: f64 = 15.84;
/// Published value of `C2`.
pub const ROUNDED_C2: f64 = 0.65;
/// Constant of the Lyapunov-type bound `164.6 / ((n-1) sigma^3) sum |a~|^3`.
pub const LYAPUNOV_CONSTANT: f64 = 164.6;

/// `(cos x - 1 + x^2/2) / |x|^3`, with the value 0 at `x = 0`.
pub fn kappa_objective(x: f64) -> f64 {
    let ax = x.abs();
    if ax == 0.0 {
        return 0.0;
    }
    let numer = if ax < 1e-2 {
        // x^4/24 - x^6/720 + x^8/40320, cancellation-free
        let x2 = ax * ax;
        x2 * x2 * (1.0 / 24.0 - x2 * (1.0 / 720.0 - x2 / 40_320.0))
    } else {
        ax.cos() - 1.0 + 0.5 * ax * ax
    };
    numer / (ax * ax * ax)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct KappaResult {
    pub kappa: f64,
    /// Unique maximizer on `x > 0`.
    pub x0: f64,
    /// Largest objective value seen by the coarse scan over `(0, 50]`.
    pub scan_max: f64,
}

/// Maximizes [`kappa_objective`].
///
/// The stationarity condition is `x (x - sin x) = 3 (cos x - 1 + x^2/2)`; its
/// root in `[3, 5]` is found by bisection, then a scan over `(0, 50]` confirms
/// that no other point does better.
pub fn kappa() -> KappaResult {
    let slope = |x: f64| x * (x - x.sin()) - 3.0 * (x.cos() - 1.0 + 0.5 * x * x);
    let (mut lo, mut hi) = (3.0f64, 5.0f64);
    debug_assert!(slope(lo) > 0.0 && slope(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x0 = 0.5 * (lo + hi);
    let scan_max = (1..=5000).map(|i| kappa_objective(0.01 * i as f64)).fold(0.0, f64::max);
    KappaResult { kappa: kappa_objective(x0), x0, scan_max }
}

/// Both sides of `|e^{ix} - sum_{j<=k} (ix)^j/j!| <= 2 (|x|^k/k!) min{1, |x|/(2(k+1))}`.
pub fn taylor_remainder_check(x: f64, k: u32) -> (f64, f64) {
    let ix = Complex64::new(0.0, x);
    let lhs = if x.abs() <= 2.0 {
        // tail sum_{j>k} (ix)^j / j!, no cancellation against e^{ix}
        let mut term = Complex64::new(1.0, 0.0);
        for j in 1..=k {
            term = term * ix / j as f64;
        }
        let mut tail = Complex64::new(0.0, 0.0);
        let mut j = k + 1;
        loop {
            term = term * ix / j as f64;
            tail += term;
            if term.norm() < 1e-300 || term.norm() < 1e-18 * tail.norm() {
                break;
            }
            j += 1;
        }
        tail.norm()
    } else {
        let mut term = Complex64::new(1.0, 0.0);
        let mut partial = term;
        for j in 1..=k {
            term = term * ix / j as f64;
            partial += term;
        }
        (ix.exp() - partial).norm()
    };
    let ax = x.abs();
    let kf = factorial_f64(k as usize);
    let rhs = 2.0 * ax.powi(k as i32) / kf * (ax / (2.0 * (k as f64 + 1.0))).min(1.0);
    (lhs, rhs)
}

/// `(2/pi) int_0^v sin^2(x)/x^2 dx`.
pub fn sinc2_cdf(v: f64, tol: f64) -> Result<f64> {
    let sinc2 = |x: f64| {
        if x.abs() < 1e-8 {
            1.0
        } else {
            let s = x.sin() / x;
            s * s
        }
    };
    Ok(2.0 / PI * integrate(sinc2, 0.0, v, tol)?)
}

/// Solves `(1+w)/2 = (2/pi) int_0^v sin^2(x)/x^2 dx` for `v` by bisection.
pub fn v_of_w(w: f64) -> Result<f64> {
    if !(w > 0.0 && w < 1.0) {
        return Err(invalid("w", format!("{w} is outside (0, 1)")));
    }
    let target = 0.5 * (1.0 + w);
    let tol = 1e-12;
    let f = |v: f64| sinc2_cdf(v, tol).map(|p| p - target);
    let mut lo = 0.0;
    let mut hi = 1.0;
    while f(hi)? < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DoubleIntegrals {
    pub c: f64,
    /// `-log(2c) / (2 c~^2)`
    pub i1: f64,
    /// `sqrt(pi) / (2 c~^2 sqrt(c)) (1 - sqrt(2c)/c~ arcsin(c~))`
    pub i2: f64,
    pub i1_numeric: f64,
    pub i2_numeric: f64,
    pub residuals: (f64, f64),
}

/// Closed forms of the two double integrals
/// `int_0^1 int_0^inf (tu)^p exp(-c t^2 u^2 - (1-u^2) t^2/2) dt du`, `p = 1, 2`,
/// each checked against nested adaptive quadrature.
pub fn double_integrals(c: f64) -> Result<DoubleIntegrals> {
    if !(c > 0.0 && c < 0.5) {
        return Err(invalid("c", format!("{c} is outside (0, 1/2)")));
    }
    let (i1, i2) = double_integrals_closed(c);
    let i1_numeric = double_integrals_numeric(c, 1)?;
    let i2_numeric = double_integrals_numeric(c, 2)?;
    Ok(DoubleIntegrals {
        c,
        i1,
        i2,
        i1_numeric,
        i2_numeric,
        residuals: ((i1 - i1_numeric).abs(), (i2 - i2_numeric).abs()),
    })
}

fn double_integrals_closed(c: f64) -> (f64, f64) {
    let ct2 = 1.0 - 2.0 * c;
    let ct = ct2.sqrt();
    let i1 = -(2.0 * c).ln() / (2.0 * ct2);
    let i2 = PI.sqrt() / (2.0 * ct2 * c.sqrt()) * (1.0 - (2.0 * c).sqrt() / ct * ct.asin());
    (i1, i2)
}

fn double_integrals_numeric(c: f64, power: i32) -> Result<f64> {
    let mut failure = None;
    let outer = |u: f64| {
        let a = c * u * u + 0.5 * (1.0 - u * u);
        let t_max = (46.0 / a).sqrt();
        let inner = |t: f64| (t * u).powi(power) * (-a * t * t).exp();
        match integrate(inner, 0.0, t_max, 1e-13) {
            Ok(v) => v,
            Err(e) => {
                failure = Some(e);
                0.0
            }
        }
    };
    let v = integrate(outer, 0.0, 1.0, 1e-11)?;
    match failure {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// Free inputs of the constant pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PipelineInputs {
    pub w: f64,
    pub m: u32,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
}

impl Default for PipelineInputs {
    /// The published choice `w = 0.89`, `m = 1367`, `C4 = 7.915`, `C5 = 0.047`, `C6 = 33`.
    fn default() -> Self {
        Self { w: 0.89, m: 1367, c4: 7.915, c5: 0.047, c6: 33.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ThetaTerms {
    pub ell: u32,
    pub theta: f64,
    pub theta_tilde: f64,
    pub d: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConstantsReport {
    pub kappa: f64,
    pub x0: f64,
    pub w: f64,
    pub v_w: f64,
    pub m: u32,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub c7: f64,
    pub c8: f64,
    pub theta: Vec<ThetaTerms>,
    pub c1: f64,
    pub c2: f64,
    /// Published rounded values, reported next to the computed ones.
    pub c1_rounded: f64,
    pub c2_rounded: f64,
}

/// Runs the constant pipeline: `C3`, `theta_l`, `D_l`, `C7`, `C8`, then
/// `C1 = max{C3, C5 C6, C7}` and `C2 = max{C3 C4, 2 kappa C5 C6^2, C8} / C1`.
pub fn derive_constants(p: PipelineInputs) -> Result<ConstantsReport> {
    let PipelineInputs { w, m, c4, c5, c6 } = p;
    if !(w > 0.0 && w < 1.0) {
        return Err(invalid("w", format!("w = {w} violates 0 < w < 1")));
    }
    if m < 4 {
        return Err(invalid("m", format!("m = {m} violates 4 <= m")));
    }
    let mf = m as f64;
    if !(c4 > ((mf - 1.0) / 27.0).sqrt()) {
        return Err(invalid("C4", format!("C4 = {c4} violates sqrt((m-1)/27) < C4")));
    }
    if !(c5 > 0.0 && c6 > 0.0 && c5 * c6 > 0.25) {
        return Err(invalid("C5, C6", format!("C5 C6 = {} violates C5, C6 > 0 and C5 C6 > 1/4", c5 * c6)));
    }
    let k = kappa();
    let v_w = v_of_w(w)?;
    let c3 = 27.0 * c4 * c4 / (4.0 * (27.0 * c4 * c4 - mf + 1.0));

    let mut theta = Vec::with_capacity(3);
    for ell in 2..=4u32 {
        let th = (mf - ell as f64) / (4.0 * mf) * (1.0 - 1.0 / (4.0 * c5 * c6));
        if !(th > 0.0 && th < 0.5) {
            return Err(invalid("m", format!("theta_{ell} = {th} is outside (0, 1/2)")));
        }
        let tt = (1.0 - 2.0 * th).sqrt();
        let d = PI.sqrt() / (-(2.0 * th).ln() * th.sqrt()) * (1.0 - (2.0 * th).sqrt() / tt * tt.asin());
        theta.push(ThetaTerms { ell, theta: th, theta_tilde: tt, d });
    }
    let log_term = |t: &ThetaTerms| -(2.0 * t.theta).ln() / (t.theta_tilde * t.theta_tilde);
    let a2 = E.powi(2) / (PI * w) * log_term(&theta[0]) / 4.0;
    let a3 = E.powi(3) * (mf - 1.0) / (PI * w * mf * (mf + 1.0)) * log_term(&theta[1]);
    let a4 = E.powi(4) * log_term(&theta[2]) / (2.0 * PI * w);
    let smooth = (1.0 + w) * v_w / ((2.0 * PI).sqrt() * w);
    let c7 = a2 + a3 + a4 + smooth * c5;
    let c8 = a2 * theta[0].d / 4.0 + a3 * theta[1].d / 2.0 + a4 * theta[2].d / 2.0 + smooth * 2.0 * k.kappa * c5 * c6;
    let c1 = c3.max(c5 * c6).max(c7);
    let c2 = (c3 * c4).max(2.0 * k.kappa * c5 * c6 * c6).max(c8) / c1;
    Ok(ConstantsReport {
        kappa: k.kappa,
        x0: k.x0,
        w,
        v_w,
        m,
        c3,
        c4,
        c5,
        c6,
        c7,
        c8,
        theta,
        c1,
        c2,
        c1_rounded: ROUNDED_C1,
        c2_rounded: ROUNDED_C2,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BoundReport {
    pub n: usize,
    pub mu: f64,
    pub sigma2: f64,
    pub c1: f64,
    pub c2: f64,
    /// `gamma(C2 / sigma)`
    pub gamma_at: f64,
    /// `(C1 / sigma^2) gamma(C2 / sigma)`
    pub bound: f64,
    pub lyapunov_bound: f64,
    pub delta_exact: Option<f64>,
    /// `bound - delta_exact`
    pub slack: Option<f64>,
}

impl BoundReport {
    pub fn with_delta_exact(mut self, delta: f64) -> Self {
        self.delta_exact = Some(delta);
        self.slack = Some(self.bound - delta);
        self
    }
}

/// `164.6 / ((n-1) sigma^3) sum |a~|^3`.
pub fn lyapunov_bound(c: &CenteredStats) -> f64 {
    LYAPUNOV_CONSTANT / ((c.n - 1) as f64 * c.sigma2 * c.sigma()) * c.abs_cube_sum()
}

/// The main bound and the Lyapunov-type bound, without the exact distance.
pub fn bound_report(m: &ScoreMatrix, c1: f64, c2: f64) -> Result<BoundReport> {
    let c = center(m);
    c.require_positive_variance()?;
    let sigma = c.sigma();
    let gamma_at = gamma(m, c2 / sigma);
    Ok(BoundReport {
        n: m.n(),
        mu: c.mu,
        sigma2: c.sigma2,
        c1,
        c2,
        gamma_at,
        bound: c1 / c.sigma2 * gamma_at,
        lyapunov_bound: lyapunov_bound(&c),
        delta_exact: None,
        slack: None,
    })
}

/// [`bound_report`] plus the exact Kolmogorov distance when `n <= enum_cap`.
pub fn berry_esseen_bound(m: &ScoreMatrix, c1: f64, c2: f64, enum_cap: usize) -> Result<BoundReport> {
    let report = bound_report(m, c1, c2)?;
    if m.n() <= enum_cap {
        let d = kolmogorov_distance(&enumerate_distribution(m, enum_cap)?)?;
        Ok(report.with_delta_exact(d.delta))
    } else {
        Ok(report)
    }
}

/// Main bound specialized to sampling without replacement:
/// `2 C1 m (n-m) / (n^2 (n-1) sigma^2) sum_{r != s} (c_r - c_s)^2 min{1, (C2/sigma) |c_r - c_s|}`.
pub fn sampling_bound(s: &SamplingModel, c1: f64, c2: f64) -> Result<f64> {
    if s.is_degenerate() {
        return Err(crate::error::Error::DegenerateVariance);
    }
    let n = s.values.len() as f64;
    let md = s.m_draw as f64;
    let sigma = s.sigma2.sqrt();
    let mut acc = 0.0;
    for (r, &cr) in s.values.iter().enumerate() {
        for (q, &cq) in s.values.iter().enumerate() {
            if r != q {
                let d = (cr - cq).abs();
                acc += d * d * (c2 / sigma * d).min(1.0);
            }
        }
    }
    Ok(2.0 * c1 * md * (n - md) / (n * n * (n - 1.0) * s.sigma2) * acc)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SmoothingBound {
    pub value: f64,
    /// `(1/(pi w)) int_0^T |phi(t) - gauss(t)| / t dt`
    pub integral_term: f64,
    /// `(1+w) v(w) / (sqrt(2 pi) w T sigma)`
    pub remainder_term: f64,
    /// Cutoff in units of the standardized statistic, `T sigma`.
    pub standardized_cutoff: f64,
}

/// Smoothing-inequality bound on the Kolmogorov distance.
///
/// `t` runs over the characteristic function of the unstandardized `S_n`, so
/// the cutoff `T` corresponds to `T sigma` for `S_n*`; the remainder term uses
/// that standardized cutoff.
pub fn smoothing_bound(m: &ScoreMatrix, w: f64, t_max: f64, tol: f64, perm_cap: usize) -> Result<SmoothingBound> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(invalid("T", format!("{t_max} is not a positive finite cutoff")));
    }
    let v = v_of_w(w)?;
    let c = center(m);
    c.require_positive_variance()?;
    if m.n() > perm_cap {
        return Err(crate::error::Error::OverCap { what: "Ryser permanent", n: m.n(), cap: perm_cap });
    }
    let (mu, sigma2) = (c.mu, c.sigma2);
    let mut failure = None;
    let integrand = |t: f64| {
        if t == 0.0 {
            return 0.0;
        }
        match charfn(m, t, perm_cap) {
            Ok(phi) => (phi - Complex64::new(-0.5 * sigma2 * t * t, t * mu).exp()).norm() / t,
            Err(e) => {
                failure = Some(e);
                0.0
            }
        }
    };
    let q = adaptive_simpson(integrand, 0.0, t_max, tol, DEFAULT_MAX_INTERVALS)?;
    if let Some(e) = failure {
        return Err(e);
    }
    let standardized_cutoff = t_max * c.sigma();
    let integral_term = q.value / (PI * w);
    let remainder_term = (1.0 + w) * v / ((2.0 * PI).sqrt() * w * standardized_cutoff);
    Ok(SmoothingBound { value: integral_term + remainder_term, integral_term, remainder_term, standardized_cutoff })
}
