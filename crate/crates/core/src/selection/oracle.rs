//! Exhaustive optima over all b-subsets, for certifying approximation factors
//! on small instances.

use ndarray::{Array2, ArrayView2};
use serde::Serialize;

use crate::distance::{euclidean, row};
use crate::{Error, Result};

/// Largest number of subsets an exhaustive search will enumerate.
pub const MAX_SUBSETS: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Optimum {
    pub value: f64,
    pub witness: Vec<usize>,
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn distance_matrix(pool: &ArrayView2<'_, f64>) -> Array2<f64> {
    let n = pool.nrows();
    Array2::from_shape_fn((n, n), |(i, j)| euclidean(row(pool, i), row(pool, j)))
}

/// Visit every `k`-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + n - k) else {
            return;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

fn guard(pool: &ArrayView2<'_, f64>, budget: usize, min_budget: usize) -> Result<()> {
    super::check_budget(pool, budget)?;
    if budget < min_budget {
        return Err(Error::InvalidBudget { budget, pool: pool.nrows() });
    }
    let count = binomial(pool.nrows(), budget);
    if count > MAX_SUBSETS {
        return Err(Error::TooLarge(count));
    }
    Ok(())
}

/// Minimum fill distance over all `budget`-subsets (the k-center optimum),
/// with the lexicographically first subset attaining it.
pub fn kcenter_bruteforce(pool: ArrayView2<'_, f64>, budget: usize) -> Result<Optimum> {
    guard(&pool, budget, 1)?;
    let dist = distance_matrix(&pool);
    let n = pool.nrows();
    let mut best = Optimum { value: f64::INFINITY, witness: Vec::new() };
    for_each_subset(n, budget, |s| {
        let fill = (0..n).map(|q| s.iter().map(|&j| dist[[q, j]]).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max);
        if fill < best.value {
            best = Optimum { value: fill, witness: s.to_vec() };
        }
    });
    Ok(best)
}

/// Maximum separation distance over all `budget`-subsets, `budget >= 2`.
pub fn maxsep_bruteforce(pool: ArrayView2<'_, f64>, budget: usize) -> Result<Optimum> {
    guard(&pool, budget, 2)?;
    let dist = distance_matrix(&pool);
    let mut best = Optimum { value: f64::NEG_INFINITY, witness: Vec::new() };
    for_each_subset(pool.nrows(), budget, |s| {
        let mut min = f64::INFINITY;
        for (a, &i) in s.iter().enumerate() {
            for &j in &s[..a] {
                min = min.min(dist[[i, j]]);
            }
        }
        let sep = 0.5 * min;
        if sep > best.value {
            best = Optimum { value: sep, witness: s.to_vec() };
        }
    });
    Ok(best)
}
