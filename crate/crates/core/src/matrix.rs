//! Square score matrices, real and complex.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Real `n x n` score matrix `A = (a[j][r])` with `n >= 2`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ScoreMatrix {
    n: usize,
    a: Vec<f64>,
}

impl ScoreMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooSmall { n, min: 2 });
        }
        if entries.len() != n * n {
            return Err(Error::NotSquare { row: entries.len() / n, len: entries.len() % n, n });
        }
        if let Some(pos) = entries.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { row: pos / n, col: pos % n });
        }
        Ok(Self { n, a: entries })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::TooSmall { n, min: 2 });
        }
        let mut a = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::NotSquare { row, len: r.len(), n });
            }
            a.extend_from_slice(r);
        }
        Self::new(n, a)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut a = Vec::with_capacity(n * n);
        for j in 0..n {
            for r in 0..n {
                a.push(f(j, r));
            }
        }
        Self::new(n, a)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `a[j][r]`, 0-based.
    #[inline]
    pub fn at(&self, j: usize, r: usize) -> f64 {
        self.a[j * self.n + r]
    }

    #[inline]
    pub fn row(&self, j: usize) -> &[f64] {
        &self.a[j * self.n..(j + 1) * self.n]
    }

    pub fn entries(&self) -> &[f64] {
        &self.a
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.a.chunks_exact(self.n)
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Entrywise map; the result must stay finite.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.n, self.a.iter().map(|&x| f(x)).collect())
    }

    /// `S_n` for one permutation given as `perm[j] = pi(j)` (0-based).
    #[inline]
    pub fn statistic(&self, perm: &[usize]) -> f64 {
        perm.iter().enumerate().map(|(j, &r)| self.at(j, r)).sum()
    }

    /// Converts a 1-based index to 0-based, checking the range.
    pub(crate) fn index0(&self, index: usize) -> Result<usize> {
        check_index(index, self.n)
    }
}

pub(crate) fn check_index(index: usize, n: usize) -> Result<usize> {
    if index == 0 || index > n {
        Err(Error::IndexOutOfRange { index, n })
    } else {
        Ok(index - 1)
    }
}

/// Complex `n x n` matrix `Y = (y[j][r])` with `n >= 2`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ComplexScoreMatrix {
    n: usize,
    y: Vec<Complex64>,
}

impl ComplexScoreMatrix {
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooSmall { n, min: 2 });
        }
        if entries.len() != n * n {
            return Err(Error::NotSquare { row: entries.len() / n, len: entries.len() % n, n });
        }
        if let Some(pos) = entries.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { row: pos / n, col: pos % n });
        }
        Ok(Self { n, y: entries })
    }

    pub fn from_parts<R: AsRef<[f64]>>(re: &[R], im: &[R]) -> Result<Self> {
        let n = re.len();
        if im.len() != n {
            return Err(Error::NotSquare { row: im.len().min(n), len: 0, n });
        }
        let mut y = Vec::with_capacity(n * n);
        for (row, (r, i)) in re.iter().zip(im).enumerate() {
            let (r, i) = (r.as_ref(), i.as_ref());
            if r.len() != n {
                return Err(Error::NotSquare { row, len: r.len(), n });
            }
            if i.len() != n {
                return Err(Error::NotSquare { row, len: i.len(), n });
            }
            y.extend(r.iter().zip(i).map(|(&a, &b)| Complex64::new(a, b)));
        }
        Self::new(n, y)
    }

    /// `Y = factor * A`, e.g. `factor = i t` for the characteristic function.
    pub fn scaled_real(a: &ScoreMatrix, factor: Complex64) -> Result<Self> {
        Self::new(a.n(), a.entries().iter().map(|&x| factor * x).collect())
    }

    pub fn scaled(&self, factor: Complex64) -> Result<Self> {
        Self::new(self.n, self.y.iter().map(|&z| factor * z).collect())
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(n, alloc::vec![Complex64::new(0.0, 0.0); n * n])
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, j: usize, r: usize) -> Complex64 {
        self.y[j * self.n + r]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.y
    }

    /// `z[j,k,r,s] = y[j][r] - y[k][r] - y[j][s] + y[k][s]`, 0-based.
    #[inline]
    pub fn z(&self, j: usize, k: usize, r: usize, s: usize) -> Complex64 {
        self.at(j, r) - self.at(k, r) - self.at(j, s) + self.at(k, s)
    }

    pub fn max_abs(&self) -> f64 {
        self.y.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_small_ragged_and_non_finite() {
        assert_eq!(ScoreMatrix::from_rows(&[vec![1.0]]), Err(Error::TooSmall { n: 1, min: 2 }));
        assert_eq!(
            ScoreMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]),
            Err(Error::NotSquare { row: 1, len: 1, n: 2 })
        );
        assert_eq!(
            ScoreMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, f64::NAN]]),
            Err(Error::NonFinite { row: 1, col: 1 })
        );
    }

    #[test]
    fn statistic_sums_along_permutation() {
        let m = ScoreMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(m.statistic(&[0, 1]), 5.0);
        assert_eq!(m.statistic(&[1, 0]), 5.0);
        assert_eq!(m.index0(2), Ok(1));
        assert!(m.index0(0).is_err());
        assert!(m.index0(3).is_err());
    }
}
