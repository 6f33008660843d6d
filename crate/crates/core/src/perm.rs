//! Permutation enumeration (Heap's algorithm) and factorials.

use alloc::vec;
use alloc::vec::Vec;

/// Visits every arrangement of `items` exactly once, in Heap's order.
///
/// `items` is permuted in place; on return it holds the last arrangement visited.
/// Empty and single-element slices are visited once.
pub fn for_each_permutation(items: &mut [usize], mut visit: impl FnMut(&[usize])) {
    let n = items.len();
    visit(items);
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            visit(items);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Visits all permutations `perm` of `0..n` (as `perm[j] = pi(j)`).
pub fn for_each_permutation_of(n: usize, visit: impl FnMut(&[usize])) {
    let mut items: Vec<usize> = (0..n).collect();
    for_each_permutation(&mut items, visit);
}

/// Visits the permutations of `0..n` with `perm[0] == first`.
///
/// The `n` blocks `first = 0..n` partition all permutations, which lets callers
/// split an enumeration into independent pieces.
pub fn for_each_permutation_with_first(n: usize, first: usize, mut visit: impl FnMut(&[usize])) {
    assert!(first < n, "first image {first} outside 0..{n}");
    let mut rest: Vec<usize> = (0..n).filter(|&r| r != first).collect();
    let mut perm = vec![0usize; n];
    perm[0] = first;
    for_each_permutation(&mut rest, |tail| {
        perm[1..].copy_from_slice(tail);
        visit(&perm);
    });
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn factorial_f64(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}
