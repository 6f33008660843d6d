//! Independent oracles and seeded corpora shared by the integration tests.
//! Nothing here calls into the enumeration or permanent code of the crate.

#![allow(dead_code)]

use cclt_core::{ComplexScoreMatrix, ScoreMatrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform entries in `[-scale, scale]`; every fourth matrix is integer valued so
/// that `S_n` has repeated values.
pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> ScoreMatrix {
    let integer = rng.gen_ratio(1, 4);
    loop {
        let m = ScoreMatrix::from_fn(n, |_, _| {
            if integer {
                scale * rng.gen_range(-3i32..=3) as f64
            } else {
                scale * rng.gen_range(-1.0..=1.0)
            }
        })
        .unwrap();
        if cclt_core::stats::center(&m).sigma2 > 1e-6 * scale * scale {
            return m;
        }
    }
}

/// Entries uniform on the disc of the given radius.
pub fn random_complex(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> ComplexScoreMatrix {
    let entries = (0..n * n)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect();
    ComplexScoreMatrix::new(n, entries).unwrap()
}

/// All permutations of `0..n` by recursive insertion.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn naive_permanent(n: usize, entries: &[Complex64]) -> Complex64 {
    permutations(n).iter().map(|p| p.iter().enumerate().map(|(j, &r)| entries[j * n + r]).product::<Complex64>()).sum()
}

pub fn naive_sn_values(m: &ScoreMatrix) -> Vec<f64> {
    permutations(m.n()).iter().map(|p| p.iter().enumerate().map(|(j, &r)| m.at(j, r)).sum()).collect()
}

/// Row and column means removed directly from the definition.
pub fn naive_center(m: &ScoreMatrix) -> Vec<f64> {
    let n = m.n();
    let nf = n as f64;
    let row = |j: usize| (0..n).map(|r| m.at(j, r)).sum::<f64>() / nf;
    let col = |r: usize| (0..n).map(|j| m.at(j, r)).sum::<f64>() / nf;
    let all = m.entries().iter().sum::<f64>() / (nf * nf);
    let mut out = vec![0.0; n * n];
    for j in 0..n {
        for r in 0..n {
            out[j * n + r] = m.at(j, r) - row(j) - col(r) + all;
        }
    }
    out
}

pub fn naive_sigma2(m: &ScoreMatrix) -> f64 {
    naive_center(m).iter().map(|v| v * v).sum::<f64>() / (m.n() - 1) as f64
}

/// `Phi` from the all-positive series
/// `erf(x) = (2/sqrt(pi)) e^{-x^2} sum_k 2^k x^{2k+1} / (1*3*...*(2k+1))`.
pub fn phi_series(x: f64) -> f64 {
    let z = x.abs() / std::f64::consts::SQRT_2;
    let mut term = z;
    let mut sum = z;
    let mut k = 0.0;
    while term > 1e-18 * sum {
        k += 1.0;
        term *= 2.0 * z * z / (2.0 * k + 1.0);
        sum += term;
    }
    let erf = 2.0 / std::f64::consts::PI.sqrt() * (-z * z).exp() * sum;
    if x >= 0.0 {
        0.5 + 0.5 * erf
    } else {
        0.5 - 0.5 * erf
    }
}

/// `sup_x |F(x) - Phi(x)|` over a dense grid plus both one-sided limits at
/// every sample value.
pub fn grid_delta(standardized: &[f64]) -> f64 {
    let mut v = standardized.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let total = v.len() as f64;
    let below = |x: f64| v.partition_point(|&s| s < x) as f64 / total;
    let at_most = |x: f64| v.partition_point(|&s| s <= x) as f64 / total;
    let mut best: f64 = 0.0;
    let lo = v[0] - 1.0;
    let hi = v[v.len() - 1] + 1.0;
    for i in 0..=20_000 {
        let x = lo + (hi - lo) * i as f64 / 20_000.0;
        best = best.max((at_most(x) - phi_series(x)).abs());
    }
    for &x in &v {
        let p = phi_series(x);
        best = best.max((at_most(x) - p).abs()).max((below(x) - p).abs());
    }
    best
}

/// Random subset of `1..=n` of the given size, sorted.
pub fn random_subset(rng: &mut ChaCha8Rng, n: usize, size: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (1..=n).collect();
    for i in 0..size {
        let k = rng.gen_range(i..n);
        all.swap(i, k);
    }
    let mut s = all[..size].to_vec();
    s.sort_unstable();
    s
}
