//! Deterministic summation.

use std::ops::Add;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

/// Leaf size of the pairwise tree.
const LEAF: usize = 16;
/// Work unit for parallel reductions; fixed so the reduction tree does
/// not depend on the number of worker threads.
pub const CHUNK: usize = 1 << 12;

pub fn pairwise_sum<T: Copy + Add<Output = T> + Default>(xs: &[T]) -> T {
    if xs.len() <= LEAF {
        return xs.iter().fold(T::default(), |a, &b| a + b);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// `Σ_{i<n} f(i)` evaluated in parallel over fixed chunks, each chunk
/// summed pairwise, then the chunk totals summed pairwise.
pub fn par_sum<T, F>(n: usize, f: F) -> T
where
    T: Copy + Add<Output = T> + Default + Send + Sync,
    F: Fn(usize) -> T + Sync,
{
    let chunks: Vec<T> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            let vals: Vec<T> = (lo..hi).map(&f).collect();
            pairwise_sum(&vals)
        })
        .collect();
    pairwise_sum(&chunks)
}

/// Like [`par_sum`] for a fixed-width vector of accumulators.
pub fn par_sum_vec<const K: usize, T, F>(n: usize, f: F) -> [T; K]
where
    T: Copy + Add<Output = T> + Default + Send + Sync,
    F: Fn(usize) -> [T; K] + Sync,
{
    let chunks: Vec<[T; K]> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            let vals: Vec<[T; K]> = (lo..hi).map(&f).collect();
            column_sums(&vals)
        })
        .collect();
    column_sums(&chunks)
}

/// Like [`par_sum`] for `width` accumulators chosen at run time.
pub fn par_sum_columns<F>(n: usize, width: usize, f: F) -> Vec<C64>
where
    F: Fn(usize) -> Vec<C64> + Sync,
{
    let chunks: Vec<Vec<C64>> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            let vals: Vec<Vec<C64>> = (lo..hi).map(&f).collect();
            dyn_column_sums(&vals, width)
        })
        .collect();
    dyn_column_sums(&chunks, width)
}

fn dyn_column_sums(rows: &[Vec<C64>], width: usize) -> Vec<C64> {
    let mut col = Vec::with_capacity(rows.len());
    (0..width)
        .map(|k| {
            col.clear();
            col.extend(rows.iter().map(|r| r[k]));
            pairwise_sum(&col)
        })
        .collect()
}

fn column_sums<const K: usize, T: Copy + Add<Output = T> + Default>(rows: &[[T; K]]) -> [T; K] {
    let mut out = [T::default(); K];
    let mut col = Vec::with_capacity(rows.len());
    for (k, o) in out.iter_mut().enumerate() {
        col.clear();
        col.extend(rows.iter().map(|r| r[k]));
        *o = pairwise_sum(&col);
    }
    out
}
