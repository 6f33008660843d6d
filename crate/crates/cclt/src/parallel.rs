//! Thread-level parallelism. Work is split by the image of the first row (for
//! enumeration) or by contiguous chunks (for grids); results are reassembled in
//! a fixed order, so the output does not depend on the thread count.

use std::thread;

use cclt_core::dist::{distribution_from_values, sn_values, sn_values_with_first, AtomDistribution};
use cclt_core::stats::center;
use cclt_core::{Error, ScoreMatrix};

use crate::error::CliResult;

pub fn sn_values_parallel(m: &ScoreMatrix, threads: usize) -> Vec<f64> {
    let n = m.n();
    if threads <= 1 || n < 3 {
        return sn_values(m);
    }
    let workers = threads.min(n);
    let mut parts: Vec<(usize, Vec<f64>)> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    (w..n).step_by(workers).map(|first| (first, sn_values_with_first(m, first))).collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("enumeration worker panicked")).collect()
    });
    parts.sort_by_key(|(first, _)| *first);
    parts.into_iter().flat_map(|(_, v)| v).collect()
}

/// Exact distribution of `S_n*`, enumerated on `threads` threads.
pub fn enumerate(m: &ScoreMatrix, cap: usize, threads: usize) -> CliResult<AtomDistribution> {
    if m.n() > cap {
        return Err(Error::OverCap { what: "exact enumeration", n: m.n(), cap }.into());
    }
    center(m).require_positive_variance()?;
    Ok(distribution_from_values(m, sn_values_parallel(m, threads))?)
}

/// `f` over `points`, split into contiguous chunks; output in input order.
pub fn map_points<T, F>(points: &[f64], threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(f64) -> T + Sync,
{
    if threads <= 1 || points.len() < 2 {
        return points.iter().map(|&t| f(t)).collect();
    }
    let chunk = points.len().div_ceil(threads);
    let f = &f;
    thread::scope(|s| {
        let handles: Vec<_> =
            points.chunks(chunk).map(|c| s.spawn(move || c.iter().map(|&t| f(t)).collect::<Vec<T>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("grid worker panicked")).collect()
    })
}
