//! Exact distribution of the standardized statistic `S_n* = (S_n - mu) / sigma`
//! and its Kolmogorov distance to the standard normal law.

use alloc::vec::Vec;
// inherent float methods are std-only; unused when std is linked in (tests)
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::ScoreMatrix;
use crate::normal::normal_cdf;
use crate::perm::{factorial, for_each_permutation_of, for_each_permutation_with_first};
use crate::stats::center;

/// Largest `n` enumerated by default (`10! = 3 628 800` permutations).
pub const DEFAULT_ENUM_CAP: usize = 10;
/// Relative tolerance, in units of `max|S_n|`, for merging equal values.
pub const MERGE_TOL: f64 = 1e-12;
pub const MIN_MC_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Atom {
    /// Standardized value `(S_n - mu) / sigma`.
    pub value: f64,
    /// Unstandardized value of `S_n`.
    pub raw: f64,
    /// Number of permutations (or samples) landing on this atom.
    pub count: u64,
    pub prob: f64,
}

/// Finite distribution as atoms sorted by strictly increasing value.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AtomDistribution {
    pub n: usize,
    pub atoms: Vec<Atom>,
    /// Sum of all counts: `n!` when exact, the sample size otherwise.
    pub total: u64,
}

impl AtomDistribution {
    /// Sorts `values` of `S_n`, merges values within `MERGE_TOL * max|S_n|` and
    /// standardizes with the given `mu`, `sigma`.
    pub fn from_values(n: usize, mut values: Vec<f64>, mu: f64, sigma: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("value list"));
        }
        values.sort_by(f64::total_cmp);
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = MERGE_TOL * scale;
        let total = values.len() as u64;
        let mut atoms = Vec::new();
        let mut start = 0;
        while start < values.len() {
            let head = values[start];
            let mut end = start + 1;
            while end < values.len() && values[end] - head <= tol {
                end += 1;
            }
            let group = &values[start..end];
            let raw = group.iter().sum::<f64>() / group.len() as f64;
            let count = group.len() as u64;
            atoms.push(Atom { value: (raw - mu) / sigma, raw, count, prob: count as f64 / total as f64 });
            start = end;
        }
        Ok(Self { n, atoms, total })
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_prob(&self) -> f64 {
        self.atoms.iter().map(|a| a.prob).sum()
    }

    /// Mean and variance of the standardized values.
    pub fn moments(&self) -> (f64, f64) {
        let mean: f64 = self.atoms.iter().map(|a| a.prob * a.value).sum();
        let var = self.atoms.iter().map(|a| a.prob * (a.value - mean) * (a.value - mean)).sum();
        (mean, var)
    }

    /// Mean and variance of the unstandardized values.
    pub fn raw_moments(&self) -> (f64, f64) {
        let mean: f64 = self.atoms.iter().map(|a| a.prob * a.raw).sum();
        let var = self.atoms.iter().map(|a| a.prob * (a.raw - mean) * (a.raw - mean)).sum();
        (mean, var)
    }

    /// `E exp(i t S_n)` over the unstandardized atoms.
    pub fn char_fn(&self, t: f64) -> Complex64 {
        self.atoms.iter().map(|a| Complex64::new(0.0, t * a.raw).exp() * a.prob).sum()
    }
}

/// All `n!` values of `S_n`, in Heap order.
pub fn sn_values(m: &ScoreMatrix) -> Vec<f64> {
    let mut out = Vec::with_capacity(factorial(m.n()) as usize);
    for_each_permutation_of(m.n(), |p| out.push(m.statistic(p)));
    out
}

/// The `(n-1)!` values of `S_n` over permutations with `pi(1) = first + 1`.
pub fn sn_values_with_first(m: &ScoreMatrix, first: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(factorial(m.n() - 1) as usize);
    for_each_permutation_with_first(m.n(), first, |p| out.push(m.statistic(p)));
    out
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::OverCap { what: "exact enumeration", n, cap })
    } else {
        Ok(())
    }
}

/// Exact distribution of `S_n*` by enumerating all permutations.
pub fn enumerate_distribution(m: &ScoreMatrix, cap: usize) -> Result<AtomDistribution> {
    check_cap(m.n(), cap)?;
    let c = center(m);
    c.require_positive_variance()?;
    AtomDistribution::from_values(m.n(), sn_values(m), c.mu, c.sigma())
}

/// Same as [`enumerate_distribution`] for values produced elsewhere (e.g. in parallel).
pub fn distribution_from_values(m: &ScoreMatrix, values: Vec<f64>) -> Result<AtomDistribution> {
    let c = center(m);
    c.require_positive_variance()?;
    AtomDistribution::from_values(m.n(), values, c.mu, c.sigma())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize), serde(rename_all = "kebab-case"))]
pub enum DeltaMethod {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DeltaReport {
    /// `sup_x |F(x) - Phi(x)|`.
    pub delta: f64,
    /// Atom at which the supremum is attained (as a left or right limit).
    pub arg_x: f64,
    pub method: DeltaMethod,
    pub std_error: Option<f64>,
    pub n: usize,
    pub atoms_count: usize,
}

/// Kolmogorov distance between a step distribution and `Phi`.
///
/// Between jumps `F` is constant and `Phi` increasing, so the supremum is one of
/// `|F(x) - Phi(x)|` or `|F(x-) - Phi(x)|` at an atom `x`.
pub fn kolmogorov_distance(d: &AtomDistribution) -> Result<DeltaReport> {
    sup_distance(d, DeltaMethod::Exact, None)
}

fn sup_distance(d: &AtomDistribution, method: DeltaMethod, std_error: Option<f64>) -> Result<DeltaReport> {
    if d.atoms.is_empty() {
        return Err(Error::Empty("atom list"));
    }
    let total = d.total as f64;
    let mut below = 0u64;
    let mut delta = -1.0;
    let mut arg_x = d.atoms[0].value;
    for a in &d.atoms {
        let phi = normal_cdf(a.value);
        let left = below as f64 / total;
        below += a.count;
        let right = below as f64 / total;
        let gap = (right - phi).abs().max((left - phi).abs());
        if gap > delta {
            delta = gap;
            arg_x = a.value;
        }
    }
    Ok(DeltaReport { delta, arg_x, method, std_error, n: d.n, atoms_count: d.atoms.len() })
}

/// Monte Carlo estimate of the Kolmogorov distance from `samples` uniform
/// permutations drawn with a seeded ChaCha8 generator.
///
/// `std_error = 1 / (2 sqrt(samples))` bounds the standard deviation of every
/// empirical CDF value.
pub fn monte_carlo_delta(m: &ScoreMatrix, samples: usize, seed: u64) -> Result<DeltaReport> {
    let values = monte_carlo_values(m, samples, seed)?;
    let c = center(m);
    let d = AtomDistribution::from_values(m.n(), values, c.mu, c.sigma())?;
    monte_carlo_report(&d)
}

/// Sampled values of `S_n`; checks the sample size and the variance.
pub fn monte_carlo_values(m: &ScoreMatrix, samples: usize, seed: u64) -> Result<Vec<f64>> {
    if samples < MIN_MC_SAMPLES {
        return Err(crate::error::invalid(
            "samples",
            alloc::format!("{samples} is below the minimum {MIN_MC_SAMPLES}"),
        ));
    }
    center(m).require_positive_variance()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..m.n()).collect();
    let mut values = Vec::with_capacity(samples);
    for _ in 0..samples {
        perm.shuffle(&mut rng);
        values.push(m.statistic(&perm));
    }
    Ok(values)
}

/// Kolmogorov distance of an empirical distribution, tagged as a Monte Carlo estimate.
pub fn monte_carlo_report(d: &AtomDistribution) -> Result<DeltaReport> {
    let se = 0.5 / (d.total as f64).sqrt();
    sup_distance(d, DeltaMethod::MonteCarlo, Some(se))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_relative_eq;

    fn two_by_two() -> ScoreMatrix {
        ScoreMatrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap()
    }

    #[test]
    fn two_atoms() {
        let d = enumerate_distribution(&two_by_two(), DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(d.atoms.len(), 2);
        assert_eq!((d.atoms[0].value, d.atoms[0].prob), (-1.0, 0.5));
        assert_eq!((d.atoms[1].value, d.atoms[1].prob), (1.0, 0.5));
        assert_eq!(d.total, 2);
    }

    #[test]
    fn delta_of_two_atoms() {
        let d = enumerate_distribution(&two_by_two(), DEFAULT_ENUM_CAP).unwrap();
        let r = kolmogorov_distance(&d).unwrap();
        assert_relative_eq!(r.delta, normal_cdf(1.0) - 0.5, max_relative = 1e-15);
        assert_relative_eq!(r.delta, 0.341_344_746_068_542_9, max_relative = 1e-14);
        assert_eq!(r.method, DeltaMethod::Exact);
        assert_eq!(r.atoms_count, 2);
    }

    #[test]
    fn single_atom_delta_is_half() {
        let d = AtomDistribution::from_values(2, vec![3.0, 3.0], 3.0, 1.0).unwrap();
        let r = kolmogorov_distance(&d).unwrap();
        assert_eq!(r.delta, 0.5);
        assert_eq!(r.arg_x, 0.0);
    }

    #[test]
    fn errors() {
        assert_eq!(AtomDistribution::from_values(2, vec![], 0.0, 1.0), Err(Error::Empty("value list")));
        let d = AtomDistribution { n: 2, atoms: vec![], total: 0 };
        assert!(kolmogorov_distance(&d).is_err());
        let constant = ScoreMatrix::from_fn(3, |_, _| 1.0).unwrap();
        assert_eq!(enumerate_distribution(&constant, 10), Err(Error::DegenerateVariance));
        let big = ScoreMatrix::from_fn(11, |j, r| (j * r) as f64).unwrap();
        assert!(matches!(enumerate_distribution(&big, 10), Err(Error::OverCap { .. })));
        assert!(monte_carlo_delta(&two_by_two(), 100, 0).is_err());
    }

    #[test]
    fn near_equal_values_merge() {
        let d = AtomDistribution::from_values(3, vec![1.0, 1.0 + 1e-14, 2.0], 0.0, 1.0).unwrap();
        assert_eq!(d.atoms.len(), 2);
        assert_eq!(d.atoms[0].count, 2);
    }
}
