//! Ryser permanents and the characteristic function of `S_n` with its bounds.
//!
//! `phi(t) = E exp(i t S_n)` equals `perm(exp(i t a[j][r])) / n!`.

use alloc::vec;
use alloc::vec::Vec;
// inherent float methods are std-only; unused when std is linked in (tests)
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::constants::KAPPA;
use crate::error::{invalid, Error, Result};
use crate::matrix::{check_index, ScoreMatrix};
use crate::perm::{factorial_f64, for_each_permutation};
use crate::quad::{adaptive_simpson, DEFAULT_MAX_INTERVALS, DEFAULT_TOL};
use crate::stats::{center, CenteredStats, GammaProfile};

/// Largest `n` for Ryser's formula by default.
pub const DEFAULT_PERM_CAP: usize = 20;
/// Hard limit of the subset counter.
const MAX_RYSER_N: usize = 40;

/// Permanent of the row-major `n x n` matrix `entries`.
///
/// Ryser's formula `(-1)^n sum_S (-1)^|S| prod_j sum_{r in S} M[j][r]`, with
/// subsets visited in Gray-code order so each step updates the row sums by one
/// column.
pub fn permanent(n: usize, entries: &[Complex64], cap: usize) -> Result<Complex64> {
    if entries.len() != n * n {
        return Err(Error::NotSquare { row: 0, len: entries.len(), n });
    }
    if n > cap.min(MAX_RYSER_N) {
        return Err(Error::OverCap { what: "Ryser permanent", n, cap: cap.min(MAX_RYSER_N) });
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut row_sums = vec![zero; n];
    let mut total = zero;
    let mut in_set = vec![false; n];
    let mut size = 0usize;
    for step in 1u64..(1u64 << n) {
        let col = step.trailing_zeros() as usize;
        if in_set[col] {
            in_set[col] = false;
            size -= 1;
            for (j, rs) in row_sums.iter_mut().enumerate() {
                *rs -= entries[j * n + col];
            }
        } else {
            in_set[col] = true;
            size += 1;
            for (j, rs) in row_sums.iter_mut().enumerate() {
                *rs += entries[j * n + col];
            }
        }
        let prod = row_sums.iter().fold(Complex64::new(1.0, 0.0), |p, &x| p * x);
        if size.is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(if n.is_multiple_of(2) { total } else { -total })
}

/// `phi(t) = perm(exp(i t a[j][r])) / n!`.
pub fn charfn(m: &ScoreMatrix, t: f64, cap: usize) -> Result<Complex64> {
    let entries: Vec<Complex64> = m.entries().iter().map(|&a| Complex64::new(0.0, t * a).exp()).collect();
    Ok(permanent(m.n(), &entries, cap)? / factorial_f64(m.n()))
}

/// Upper bound on `|phi(t)|`:
/// `((1/(n^2 (n-1)^2)) sum cos^2(t b / 2))^(floor(n/2) / 2)`.
pub fn charfn_bound(m: &ScoreMatrix, t: f64) -> f64 {
    let n = m.n();
    let nf = n as f64;
    let mean = crate::stats::quadruple_sum(m, |b| {
        let c = (0.5 * t * b).cos();
        c * c
    }) / (nf * nf * (nf - 1.0) * (nf - 1.0));
    mean.min(1.0).powf((n / 2) as f64 / 2.0)
}

/// Value of the damping function `h_ell(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct HellValue {
    pub ell: f64,
    pub t: f64,
    pub value: f64,
    /// `sigma^2 - gamma(2 kappa t) / 4`, nonnegative up to roundoff.
    pub reduced_variance: f64,
}

/// Characteristic function of a score matrix together with everything needed
/// for its bounds, computed once.
#[derive(Debug, Clone)]
pub struct CfContext {
    matrix: ScoreMatrix,
    stats: CenteredStats,
    gamma: GammaProfile,
    kappa: f64,
    perm_cap: usize,
}

/// Characteristic function and bounds at one `t`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CfEvaluation {
    pub t: f64,
    pub phi: Complex64,
    /// `exp(i t mu - sigma^2 t^2 / 2)`
    pub gauss: Complex64,
    pub modulus_bound: f64,
    pub diff_bound_integral: f64,
    pub diff_bound_closed: f64,
    /// Simplified closed form, available for `n >= 6`.
    pub diff_bound_simplified: Option<f64>,
}

/// Both closed-form bounds on `|phi(t) - gauss(t)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ClosedBounds {
    pub general: f64,
    pub simplified: Option<f64>,
}

impl CfContext {
    pub fn new(m: &ScoreMatrix) -> Self {
        Self::with_kappa(m, KAPPA)
    }

    pub fn with_kappa(m: &ScoreMatrix, kappa: f64) -> Self {
        Self {
            matrix: m.clone(),
            stats: center(m),
            gamma: GammaProfile::quadruple(m),
            kappa,
            perm_cap: DEFAULT_PERM_CAP,
        }
    }

    pub fn with_perm_cap(mut self, cap: usize) -> Self {
        self.perm_cap = cap;
        self
    }

    pub fn matrix(&self) -> &ScoreMatrix {
        &self.matrix
    }

    pub fn stats(&self) -> &CenteredStats {
        &self.stats
    }

    pub fn gamma(&self, x: f64) -> f64 {
        self.gamma.eval(x)
    }

    fn n(&self) -> f64 {
        self.matrix.n() as f64
    }

    pub fn phi(&self, t: f64) -> Result<Complex64> {
        charfn(&self.matrix, t, self.perm_cap)
    }

    pub fn gauss(&self, t: f64) -> Complex64 {
        Complex64::new(-0.5 * self.stats.sigma2 * t * t, t * self.stats.mu).exp()
    }

    pub fn modulus_bound(&self, t: f64) -> f64 {
        charfn_bound(&self.matrix, t)
    }

    /// `h_ell(t) = min{1, exp(ell - ((n-ell-1)/(4(n-1))) t^2 (sigma^2 - gamma(2 kappa t)/4))} 1[n >= ell]`.
    pub fn h_ell(&self, t: f64, ell: f64) -> HellValue {
        let n = self.n();
        let reduced_variance = self.stats.sigma2 - 0.25 * self.gamma(2.0 * self.kappa * t);
        let value = if n < ell {
            0.0
        } else {
            let expo = ell - (n - ell - 1.0) / (4.0 * (n - 1.0)) * t * t * reduced_variance;
            expo.exp().min(1.0)
        };
        HellValue { ell, t, value, reduced_variance }
    }

    fn h(&self, t: f64, ell: f64) -> f64 {
        self.h_ell(t, ell).value
    }

    /// Integral bound on `|phi(t) - gauss(t)|`, by adaptive Simpson in `u` over `[0, 1]`.
    pub fn cf_diff_bound_integral(&self, t: f64, tol: f64) -> Result<f64> {
        self.stats.require_positive_variance()?;
        if !(tol > 0.0) {
            return Err(invalid("tol", "quadrature tolerance must be positive"));
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        let n = self.n();
        let sigma2 = self.stats.sigma2;
        let w3 = 2.0 * (n - 2.0) / (n * (n - 1.0));
        let w4 = (n - 2.0) * (n - 3.0) / (n * (n - 1.0));
        let integrand = |u: f64| {
            let s = t * u;
            let g_half = self.gamma(0.5 * s);
            let mut inner = 0.5 * self.h(s, 2.0) * self.gamma(0.25 * s);
            if w3 > 0.0 {
                inner += w3 * self.h(s, 3.0) * g_half;
            }
            if w4 > 0.0 {
                inner += w4 * self.h(s, 4.0) * g_half;
            }
            t * t * u * inner * (-(1.0 - u * u) * sigma2 * t * t * 0.5).exp()
        };
        Ok(adaptive_simpson(integrand, 0.0, 1.0, tol, DEFAULT_MAX_INTERVALS)?.value)
    }

    /// Closed-form bounds on `|phi(t) - gauss(t)|`; the simplified one needs `n >= 6`.
    pub fn cf_diff_bound_closed(&self, t: f64) -> Result<ClosedBounds> {
        self.stats.require_positive_variance()?;
        let n = self.n();
        let t2 = t * t;
        let g3 = self.gamma(t / 3.0);
        let general = 0.25 * t2 * self.gamma(t / 6.0) * self.h(t, 2.0)
            + (n - 2.0) * t2 / (n * (n - 1.0)) * g3 * self.h(t, 3.0)
            + (n - 2.0) * (n - 3.0) * t2 / (2.0 * n * (n - 1.0)) * g3 * self.h(t, 4.0);
        let simplified = (self.matrix.n() >= 6).then(|| {
            let reduced = self.stats.sigma2 - 0.25 * self.gamma(2.0 * self.kappa * t);
            32.0 * t2 * g3 * (-t2 / 20.0 * reduced).exp()
        });
        Ok(ClosedBounds { general, simplified })
    }

    pub fn evaluate(&self, t: f64, tol: f64) -> Result<CfEvaluation> {
        let closed = self.cf_diff_bound_closed(t)?;
        Ok(CfEvaluation {
            t,
            phi: self.phi(t)?,
            gauss: self.gauss(t),
            modulus_bound: self.modulus_bound(t),
            diff_bound_integral: self.cf_diff_bound_integral(t, tol)?,
            diff_bound_closed: closed.general,
            diff_bound_simplified: closed.simplified,
        })
    }

    /// Restricted permutation sum with rows `[n] \ M` mapped onto columns `[n] \ L`
    /// (1-based index sets), compared against `h_ell(t)`. Returns `(lhs, rhs)`.
    pub fn restricted_sum_check(&self, l_set: &[usize], m_set: &[usize], t: f64, cap: usize) -> Result<(f64, f64)> {
        let n = self.matrix.n();
        if l_set.len() != m_set.len() {
            return Err(invalid("index sets", "L and M must have the same size"));
        }
        let ell = l_set.len();
        let cols = complement(l_set, n)?;
        let rows = complement(m_set, n)?;
        let free = n - ell;
        if free > cap {
            return Err(Error::OverCap { what: "restricted enumeration", n: free, cap });
        }
        let mut items = cols.clone();
        let mut acc = Complex64::new(0.0, 0.0);
        for_each_permutation(&mut items, |p| {
            let s: f64 = rows.iter().zip(p).map(|(&j, &r)| self.matrix.at(j, r)).sum();
            acc += Complex64::new(0.0, t * s).exp();
        });
        let lhs = acc.norm() / factorial_f64(free);
        Ok((lhs, self.h(t, ell as f64)))
    }
}

fn complement(set: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut member = vec![false; n];
    for &i in set {
        let i0 = check_index(i, n)?;
        if member[i0] {
            return Err(invalid("index sets", alloc::format!("index {i} is repeated")));
        }
        member[i0] = true;
    }
    Ok((0..n).filter(|&i| !member[i]).collect())
}

/// `h_ell(t)` for a matrix; see [`CfContext::h_ell`].
pub fn h_ell(m: &ScoreMatrix, t: f64, ell: f64) -> Result<HellValue> {
    if !(ell >= 0.0) {
        return Err(invalid("ell", "must be nonnegative"));
    }
    Ok(CfContext::new(m).h_ell(t, ell))
}

pub fn restricted_sum_check(
    m: &ScoreMatrix,
    l_set: &[usize],
    m_set: &[usize],
    t: f64,
    cap: usize,
) -> Result<(f64, f64)> {
    CfContext::new(m).restricted_sum_check(l_set, m_set, t, cap)
}

pub fn cf_diff_bound_integral(m: &ScoreMatrix, t: f64, tol: f64) -> Result<f64> {
    CfContext::new(m).cf_diff_bound_integral(t, tol)
}

pub fn cf_diff_bound_closed(m: &ScoreMatrix, t: f64) -> Result<ClosedBounds> {
    CfContext::new(m).cf_diff_bound_closed(t)
}

/// Full evaluation at `t` with the default quadrature tolerance.
pub fn evaluate(m: &ScoreMatrix, t: f64) -> Result<CfEvaluation> {
    CfContext::new(m).evaluate(t, DEFAULT_TOL)
}
