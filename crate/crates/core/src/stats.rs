//! Centering, variance and the truncated moment functionals of a score matrix.
//!
//! All quadruple sums run over ordered pairs `(j, k)` and `(r, s)` with distinct
//! components. They are evaluated by direct loops with compensated summation and
//! serve as the reference values. [`GammaProfile`] evaluates the same functionals
//! from sorted magnitudes when many evaluation points are needed.

use alloc::vec::Vec;
// inherent float methods are std-only; unused when std is linked in (tests)
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{invalid, Error, Result};
use crate::matrix::ScoreMatrix;
use crate::sum::{compensated, CompensatedSum};

/// Relative tolerance for the zero row and column sums of the centered matrix.
pub const CENTERING_TOL: f64 = 1e-10;

/// Variance threshold, relative to `max|a|^2`, below which a matrix counts as degenerate.
const DEGENERATE_REL: f64 = 1e-24;

/// Derived scalars of a score matrix.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CenteredStats {
    pub n: usize,
    /// Doubly centered matrix, row-major.
    pub a_tilde: Vec<f64>,
    pub row_means: Vec<f64>,
    pub col_means: Vec<f64>,
    pub grand_mean: f64,
    /// Mean of `S_n`.
    pub mu: f64,
    /// Variance of `S_n`, from the pair sum over the centered matrix.
    pub sigma2: f64,
    /// Mean absolute cube of the quadruple differences.
    pub delta: f64,
    scale: f64,
}

impl CenteredStats {
    #[inline]
    pub fn a_tilde_at(&self, j: usize, r: usize) -> f64 {
        self.a_tilde[j * self.n + r]
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }

    /// Largest `|a[j][r]|` of the source matrix.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn is_degenerate(&self) -> bool {
        self.sigma2 <= DEGENERATE_REL * self.scale * self.scale
    }

    /// Errors with [`Error::DegenerateVariance`] unless `sigma2 > 0`.
    pub fn require_positive_variance(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(Error::DegenerateVariance)
        } else {
            Ok(())
        }
    }

    /// `gamma~(x) = (1/(n-1)) sum_{j,r} a~^2 min{1, |x a~|}`.
    pub fn gamma_tilde(&self, x: f64) -> f64 {
        let ax = x.abs();
        compensated(self.a_tilde.iter().map(|&t| t * t * (ax * t.abs()).min(1.0))) / (self.n - 1) as f64
    }

    /// `sum_{j,r} |a~[j][r]|^3`.
    pub fn abs_cube_sum(&self) -> f64 {
        compensated(self.a_tilde.iter().map(|t| t.abs().powi(3)))
    }

    /// Largest absolute row or column sum of the centered matrix.
    pub fn max_margin(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for j in 0..n {
            let row = compensated((0..n).map(|r| self.a_tilde_at(j, r)));
            let col = compensated((0..n).map(|r| self.a_tilde_at(r, j)));
            worst = worst.max(row.abs()).max(col.abs());
        }
        worst
    }
}

/// Centers `A` and computes `mu`, `sigma^2` (pair-sum form) and `delta`.
pub fn center(m: &ScoreMatrix) -> CenteredStats {
    let n = m.n();
    let nf = n as f64;
    let row_means: Vec<f64> = (0..n).map(|j| compensated(m.row(j).iter().copied()) / nf).collect();
    let col_means: Vec<f64> = (0..n).map(|r| compensated((0..n).map(|j| m.at(j, r))) / nf).collect();
    let grand_mean = compensated(m.entries().iter().copied()) / (nf * nf);
    let mut a_tilde = Vec::with_capacity(n * n);
    for j in 0..n {
        for r in 0..n {
            a_tilde.push(m.at(j, r) - col_means[r] - row_means[j] + grand_mean);
        }
    }
    let sigma2 = compensated(a_tilde.iter().map(|t| t * t)) / (nf - 1.0);
    let delta = quadruple_sum(m, |b| b.abs().powi(3)) / (nf * nf * (nf - 1.0));
    CenteredStats {
        n,
        a_tilde,
        row_means,
        col_means,
        grand_mean,
        mu: nf * grand_mean,
        sigma2,
        delta,
        scale: m.max_abs(),
    }
}

/// `sum_{(j,k) distinct} sum_{(r,s) distinct} f(b[j,k,r,s])`.
pub(crate) fn quadruple_sum(m: &ScoreMatrix, f: impl Fn(f64) -> f64) -> f64 {
    let n = m.n();
    let mut acc = CompensatedSum::new();
    for j in 0..n {
        for k in 0..n {
            if j == k {
                continue;
            }
            let (rj, rk) = (m.row(j), m.row(k));
            for r in 0..n {
                let d = rj[r] - rk[r];
                for s in 0..n {
                    if r != s {
                        acc += f(d - rj[s] + rk[s]);
                    }
                }
            }
        }
    }
    acc.value()
}

/// Variance of `S_n` from the quadruple-difference form
/// `(1/(4 n^2 (n-1))) sum b^2`.
pub fn variance_quadruple(m: &ScoreMatrix) -> f64 {
    let nf = m.n() as f64;
    quadruple_sum(m, |b| b * b) / (4.0 * nf * nf * (nf - 1.0))
}

/// `b[j,k,r,s] = a[j][r] - a[k][r] - a[j][s] + a[k][s]` with 1-based indices.
pub fn b_diff(m: &ScoreMatrix, j: usize, k: usize, r: usize, s: usize) -> Result<f64> {
    let (j, k, r, s) = (m.index0(j)?, m.index0(k)?, m.index0(r)?, m.index0(s)?);
    // grouped so that swapping j and k negates the result bit for bit
    Ok((m.at(j, r) - m.at(k, r)) - (m.at(j, s) - m.at(k, s)))
}

/// The same difference evaluated on the centered matrix, 1-based indices.
pub fn b_diff_centered(c: &CenteredStats, j: usize, k: usize, r: usize, s: usize) -> Result<f64> {
    let idx = |i| crate::matrix::check_index(i, c.n);
    let (j, k, r, s) = (idx(j)?, idx(k)?, idx(r)?, idx(s)?);
    Ok((c.a_tilde_at(j, r) - c.a_tilde_at(k, r)) - (c.a_tilde_at(j, s) - c.a_tilde_at(k, s)))
}

/// `gamma(x) = (1/(n^2 (n-1))) sum b^2 min{1, |x b|}`, by direct quadruple summation.
pub fn gamma(m: &ScoreMatrix, x: f64) -> f64 {
    let nf = m.n() as f64;
    let ax = x.abs();
    quadruple_sum(m, |b| b * b * (ax * b.abs()).min(1.0)) / (nf * nf * (nf - 1.0))
}

/// `gamma~(x)`; see [`CenteredStats::gamma_tilde`].
pub fn gamma_tilde(m: &ScoreMatrix, x: f64) -> f64 {
    center(m).gamma_tilde(x)
}

/// `g(x, y) = x^2 min{1, |y|}`.
#[inline]
pub fn g_clip(x: f64, y: f64) -> f64 {
    x * x * y.abs().min(1.0)
}

/// Which sum a [`GammaProfile`] was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaMethod {
    /// Quadruple differences `b`, giving `gamma`.
    QuadrupleSum,
    /// Centered entries `a~`, giving `gamma~`.
    PairSum,
}

/// Fast evaluator for `gamma` or `gamma~` at many points.
///
/// Both functionals have the form `(1/norm) sum_i v_i^2 min{1, |x| |v_i|}`.
/// With the magnitudes sorted, a value splits into a cubic part below the
/// threshold `1/|x|` and a quadratic part above it.
#[derive(Debug, Clone)]
pub struct GammaProfile {
    method: GammaMethod,
    magnitudes: Vec<f64>,
    /// `cube_prefix[i] = sum_{l < i} |v_l|^3`
    cube_prefix: Vec<f64>,
    /// `square_suffix[i] = sum_{l >= i} v_l^2`
    square_suffix: Vec<f64>,
    norm: f64,
}

impl GammaProfile {
    pub fn quadruple(m: &ScoreMatrix) -> Self {
        let n = m.n();
        let mut mags = Vec::with_capacity(n * n * (n - 1) * (n - 1));
        for j in 0..n {
            for k in 0..n {
                if j == k {
                    continue;
                }
                for r in 0..n {
                    for s in 0..n {
                        if r != s {
                            mags.push((m.at(j, r) - m.at(k, r) - m.at(j, s) + m.at(k, s)).abs());
                        }
                    }
                }
            }
        }
        let nf = n as f64;
        Self::build(GammaMethod::QuadrupleSum, mags, nf * nf * (nf - 1.0))
    }

    pub fn pair(c: &CenteredStats) -> Self {
        let mags = c.a_tilde.iter().map(|t| t.abs()).collect();
        Self::build(GammaMethod::PairSum, mags, (c.n - 1) as f64)
    }

    fn build(method: GammaMethod, mut magnitudes: Vec<f64>, norm: f64) -> Self {
        magnitudes.sort_by(f64::total_cmp);
        let len = magnitudes.len();
        let mut cube_prefix = Vec::with_capacity(len + 1);
        let mut acc = CompensatedSum::new();
        cube_prefix.push(0.0);
        for &v in &magnitudes {
            acc += v * v * v;
            cube_prefix.push(acc.value());
        }
        let mut square_suffix = alloc::vec![0.0; len + 1];
        let mut acc = CompensatedSum::new();
        for i in (0..len).rev() {
            acc += magnitudes[i] * magnitudes[i];
            square_suffix[i] = acc.value();
        }
        Self { method, magnitudes, cube_prefix, square_suffix, norm }
    }

    pub fn method(&self) -> GammaMethod {
        self.method
    }

    /// Limit of the functional as `|x| -> infinity`.
    pub fn limit(&self) -> f64 {
        self.square_suffix[0] / self.norm
    }

    pub fn eval(&self, x: f64) -> f64 {
        let ax = x.abs();
        if ax == 0.0 {
            return 0.0;
        }
        // min{1, |x| v} = |x| v exactly when |x| v <= 1
        let split = self.magnitudes.partition_point(|&v| ax * v <= 1.0);
        (ax * self.cube_prefix[split] + self.square_suffix[split]) / self.norm
    }
}

/// Score matrix of the sampling-without-replacement model together with its
/// closed-form moments.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SamplingModel {
    pub matrix: ScoreMatrix,
    pub values: Vec<f64>,
    pub m_draw: usize,
    pub mu: f64,
    pub sigma2: f64,
}

impl SamplingModel {
    pub fn is_degenerate(&self) -> bool {
        let scale = self.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        self.sigma2 <= DEGENERATE_REL * scale * scale
    }
}

/// Sum of `m_draw` of the values `c` drawn without replacement:
/// `a[j][r] = c[r]` for the first `m_draw` rows and `0` otherwise.
pub fn from_sampling(c: &[f64], m_draw: usize) -> Result<SamplingModel> {
    let n = c.len();
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    if m_draw == 0 || m_draw > n {
        return Err(invalid("m_draw", alloc::format!("{m_draw} is outside 1..={n}")));
    }
    let matrix = ScoreMatrix::from_fn(n, |j, r| if j < m_draw { c[r] } else { 0.0 })?;
    let nf = n as f64;
    let mf = m_draw as f64;
    let mean = compensated(c.iter().copied()) / nf;
    let ss = compensated(c.iter().map(|&x| (x - mean) * (x - mean)));
    Ok(SamplingModel {
        matrix,
        values: c.to_vec(),
        m_draw,
        mu: mf * mean,
        sigma2: mf * (nf - mf) / (nf * (nf - 1.0)) * ss,
    })
}
