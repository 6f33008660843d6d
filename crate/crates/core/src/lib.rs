//! Numerical core for error bounds in the combinatorial central limit theorem.
//!
//! The statistic of interest is `S_n = sum_j a[j][pi(j)]` for a uniformly random
//! permutation `pi` and a real score matrix `A`. This crate provides
//!
//! * centering, variance and the truncated second-moment functionals of `A` ([`stats`]),
//! * the exact distribution of the standardized statistic and its Kolmogorov
//!   distance to the standard normal law ([`dist`]),
//! * Ryser permanents, the characteristic function and its bounds ([`permanent`]),
//! * a permanent identity for general complex matrices, checked by enumeration ([`identity`]),
//! * the scalar constants and the resulting Berry-Esseen type bounds ([`constants`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command line
//! and thread-level parallelism live in the `cclt` crate.
#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` style checks are meant to reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod constants;
pub mod dist;
pub mod error;
pub mod identity;
pub mod matrix;
pub mod normal;
pub mod perm;
pub mod permanent;
pub mod quad;
pub mod stats;
mod sum;

pub use error::{Error, Result};
pub use matrix::{ComplexScoreMatrix, ScoreMatrix};
pub use num_complex::Complex64;
