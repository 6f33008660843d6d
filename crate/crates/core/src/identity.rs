//! Permanent identity for `perm(exp(y[j][r]))` with a general complex matrix `Y`.
//!
//! With `c_r = sum_j y[j][r(j)]`, `alpha = (1/n) sum y` and
//! `beta = (1/(n-1)) sum y~^2` (algebraic squares, no conjugation),
//!
//! ```text
//! (1/n!) sum_r e^{c_r} - e^{alpha + beta/2}
//!     = (1/n!) int_0^1 f(u) exp((1-u) alpha + (1-u^2) beta/2) du
//! ```
//!
//! where `f = f1/(4n) + f2/(n^2(n-1)) + f3/(4n^2(n-1))` is a sum over all
//! permutations and over tuples of distinct row indices. Everything here is
//! evaluated by plain enumeration and is meant for verification at small `n`.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::matrix::ComplexScoreMatrix;
use crate::perm::{factorial_f64, for_each_permutation_of};
use crate::permanent::permanent;
use crate::quad::{adaptive_simpson, DEFAULT_MAX_INTERVALS};

/// Default enumeration cap for the identity checks.
pub const DEFAULT_IDENTITY_CAP: usize = 8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::OverCap { what: "permutation enumeration", n, cap })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct IdentityTerms {
    pub alpha: Complex64,
    pub beta: Complex64,
    /// `(r, c_r)` for every permutation `r` (0-based images); `None` above the cap.
    pub c_values: Option<Vec<(Vec<usize>, Complex64)>>,
}

/// `y~[j][r] = y[j][r] - y[., r] - y[j, .] + y[., .]`, row-major.
pub fn centered(y: &ComplexScoreMatrix) -> Vec<Complex64> {
    let n = y.n();
    let nf = n as f64;
    let row: Vec<Complex64> = (0..n).map(|j| (0..n).map(|r| y.at(j, r)).sum::<Complex64>() / nf).collect();
    let col: Vec<Complex64> = (0..n).map(|r| (0..n).map(|j| y.at(j, r)).sum::<Complex64>() / nf).collect();
    let grand = y.entries().iter().sum::<Complex64>() / (nf * nf);
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        for r in 0..n {
            out.push(y.at(j, r) - col[r] - row[j] + grand);
        }
    }
    out
}

pub fn alpha(y: &ComplexScoreMatrix) -> Complex64 {
    y.entries().iter().sum::<Complex64>() / y.n() as f64
}

/// `beta` from the centered pair sum.
pub fn beta_pair(y: &ComplexScoreMatrix) -> Complex64 {
    centered(y).iter().map(|t| t * t).sum::<Complex64>() / (y.n() - 1) as f64
}

/// `beta` from the quadruple sum `(1/(4n^2(n-1))) sum z^2`.
pub fn beta_quadruple(y: &ComplexScoreMatrix) -> Complex64 {
    let n = y.n();
    let mut acc = ZERO;
    for j in 0..n {
        for k in 0..n {
            if j == k {
                continue;
            }
            for r in 0..n {
                for s in 0..n {
                    if r != s {
                        let z = y.z(j, k, r, s);
                        acc += z * z;
                    }
                }
            }
        }
    }
    let nf = n as f64;
    acc / (4.0 * nf * nf * (nf - 1.0))
}

pub fn identity_terms(y: &ComplexScoreMatrix, cap: usize) -> IdentityTerms {
    let c_values = (y.n() <= cap).then(|| {
        let mut out = Vec::new();
        for_each_permutation_of(y.n(), |p| out.push((p.to_vec(), c_value(y, p))));
        out
    });
    IdentityTerms { alpha: alpha(y), beta: beta_pair(y), c_values }
}

#[inline]
fn c_value(y: &ComplexScoreMatrix, perm: &[usize]) -> Complex64 {
    perm.iter().enumerate().map(|(j, &r)| y.at(j, r)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FTerms {
    pub f1: Complex64,
    pub f2: Complex64,
    pub f3: Complex64,
    pub f: Complex64,
}

/// `f1(u)`, `f2(u)`, `f3(u)` and `f(u)` by enumeration over all permutations.
///
/// Per permutation `r`, with `Z[j][k] = z[j,k,r(j),r(k)]` and
/// `E[j][l] = exp(u z[j,l,r(l),r(j)])`:
///
/// ```text
/// f1 += sum_{j,k}       Z (1 - u Z - exp(-u Z)) e^{u c_r}
/// f2 += sum_{j,k,l}     u Z^2 (1 - E[j][l]) e^{u c_r}
/// f3 += sum_{j,k,l,m}   u Z^2 (1 - E[j][l] E[k][m]) e^{u c_r}
/// ```
///
/// with all row indices in each tuple distinct.
pub fn f_terms(y: &ComplexScoreMatrix, u: f64, cap: usize) -> Result<FTerms> {
    let n = y.n();
    check_cap(n, cap)?;
    let mut zjk = vec![ZERO; n * n];
    let mut ejl = vec![ZERO; n * n];
    let (mut f1, mut f2, mut f3) = (ZERO, ZERO, ZERO);
    for_each_permutation_of(n, |r| {
        let weight = (c_value(y, r) * u).exp();
        for j in 0..n {
            for k in 0..n {
                if j != k {
                    zjk[j * n + k] = y.z(j, k, r[j], r[k]);
                    ejl[j * n + k] = (y.z(j, k, r[k], r[j]) * u).exp();
                }
            }
        }
        let (mut s1, mut s2, mut s3) = (ZERO, ZERO, ZERO);
        for j in 0..n {
            for k in 0..n {
                if j == k {
                    continue;
                }
                let z = zjk[j * n + k];
                s1 += z * (ONE - z * u - (-z * u).exp());
                let z2u = z * z * u;
                for l in 0..n {
                    if l == j || l == k {
                        continue;
                    }
                    let e_jl = ejl[j * n + l];
                    s2 += z2u * (ONE - e_jl);
                    for m in 0..n {
                        if m == j || m == k || m == l {
                            continue;
                        }
                        s3 += z2u * (ONE - e_jl * ejl[k * n + m]);
                    }
                }
            }
        }
        f1 += s1 * weight;
        f2 += s2 * weight;
        f3 += s3 * weight;
    });
    let nf = n as f64;
    let f = f1 / (4.0 * nf) + f2 / (nf * nf * (nf - 1.0)) + f3 / (4.0 * nf * nf * (nf - 1.0));
    Ok(FTerms { f1, f2, f3, f })
}

/// `sum_r (c_r - alpha - u beta) e^{u c_r}` by enumeration.
///
/// Also returns `sum_r |c_r - alpha - u beta| |e^{u c_r}|`, the natural scale
/// for roundoff in the sum.
pub fn pointwise_lhs(y: &ComplexScoreMatrix, u: f64, cap: usize) -> Result<(Complex64, f64)> {
    check_cap(y.n(), cap)?;
    let a = alpha(y);
    let b = beta_pair(y);
    let mut acc = ZERO;
    let mut scale = 0.0;
    for_each_permutation_of(y.n(), |r| {
        let c = c_value(y, r);
        let term = (c - a - b * u) * (c * u).exp();
        acc += term;
        scale += term.norm();
    });
    Ok((acc, scale))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PointwiseResidual {
    /// `|sum_r (c_r - alpha - u beta) e^{u c_r} - f(u)|`
    pub residual: f64,
    /// `max{1, sum_r |(c_r - alpha - u beta) e^{u c_r}|}`
    pub scale: f64,
}

impl PointwiseResidual {
    pub fn relative(&self) -> f64 {
        self.residual / self.scale
    }
}

pub fn pointwise_residual(y: &ComplexScoreMatrix, u: f64, cap: usize) -> Result<PointwiseResidual> {
    let (lhs, scale) = pointwise_lhs(y, u, cap)?;
    let f = f_terms(y, u, cap)?.f;
    Ok(PointwiseResidual { residual: (lhs - f).norm(), scale: scale.max(1.0) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct IdentityCheck {
    /// `perm(exp(Y)) / n! - exp(alpha + beta/2)`
    pub lhs: Complex64,
    /// `(1/n!) int_0^1 f(u) exp((1-u) alpha + (1-u^2) beta/2) du`
    pub rhs: Complex64,
    pub residual: f64,
}

/// Both sides of the permanent identity; the integral is computed to absolute tolerance `tol`.
pub fn identity_check(y: &ComplexScoreMatrix, tol: f64, cap: usize) -> Result<IdentityCheck> {
    if !(tol > 0.0) {
        return Err(invalid("tol", "quadrature tolerance must be positive"));
    }
    let n = y.n();
    check_cap(n, cap)?;
    let nfact = factorial_f64(n);
    let a = alpha(y);
    let b = beta_pair(y);
    let exp_entries: Vec<Complex64> = y.entries().iter().map(|z| z.exp()).collect();
    let lhs = permanent(n, &exp_entries, cap)? / nfact - (a + b * 0.5).exp();

    let mut failure = None;
    let integrand = |u: f64| match f_terms(y, u, cap) {
        Ok(t) => t.f * (a * (1.0 - u) + b * (0.5 * (1.0 - u * u))).exp() / nfact,
        Err(e) => {
            failure = Some(e);
            ZERO
        }
    };
    let rhs = adaptive_simpson(integrand, 0.0, 1.0, tol, DEFAULT_MAX_INTERVALS)?.value;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(IdentityCheck { lhs, rhs, residual: (lhs - rhs).norm() })
}

/// Test functions `g(v, w)` of 1-based column indices used by [`swap_identity_check`].
pub const SWAP_TEST_FAMILY: [fn(f64, f64) -> f64; 2] = [|v, w| v + 2.0 * w, |v, w| v * w];

/// Largest residual of the swap identity
/// `sum_r g(r(j), r(k)) e^{c_r} = sum_r g(r(k), r(j)) exp(z[j,k,r(k),r(j)]) e^{c_r}`
/// over [`SWAP_TEST_FAMILY`]; `j`, `k` are distinct 1-based rows.
pub fn swap_identity_check(y: &ComplexScoreMatrix, j: usize, k: usize, cap: usize) -> Result<f64> {
    let n = y.n();
    let j0 = crate::matrix::check_index(j, n)?;
    let k0 = crate::matrix::check_index(k, n)?;
    if j0 == k0 {
        return Err(invalid("rows", "j and k must be distinct"));
    }
    check_cap(n, cap)?;
    let mut worst = 0.0f64;
    for g in SWAP_TEST_FAMILY {
        let (mut lhs, mut rhs) = (ZERO, ZERO);
        for_each_permutation_of(n, |r| {
            let e = c_value(y, r).exp();
            let (vj, vk) = ((r[j0] + 1) as f64, (r[k0] + 1) as f64);
            lhs += e * g(vj, vk);
            rhs += y.z(j0, k0, r[k0], r[j0]).exp() * e * g(vk, vj);
        });
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}
