//! Greedy facility location (add-only): each step adds the row that most
//! reduces the summed distance from every pool row to its nearest selected row.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use ndarray::{Array2, ArrayView2};
use rand::Rng;
use rayon::prelude::*;

use super::{check_budget, check_start, Sampler, SelectionResult};
use crate::distance::{euclidean, row};
use crate::{seed, Result};

pub const NAME: &str = "facility_location";

// Pools up to this size get a precomputed distance matrix (128 MiB at the limit).
const DENSE_LIMIT: usize = 4096;

/// Sum over pool rows of the distance to the nearest selected row.
pub fn facility_objective(pool: ArrayView2<'_, f64>, selected: &[usize]) -> f64 {
    (0..pool.nrows())
        .map(|q| selected.iter().map(|&j| euclidean(row(&pool, q), row(&pool, j))).fold(f64::INFINITY, f64::min))
        .sum()
}

pub fn facility_location(
    pool: ArrayView2<'_, f64>,
    budget: usize,
    seed: u64,
    start_index: Option<usize>,
) -> Result<SelectionResult> {
    check_budget(&pool, budget)?;
    check_start(&pool, start_index)?;
    let n = pool.nrows();
    let first = start_index.unwrap_or_else(|| seed::rng(seed).random_range(0..n));

    let dense = (n <= DENSE_LIMIT).then(|| {
        let mut m = Array2::zeros((n, n));
        m.axis_iter_mut(ndarray::Axis(0)).into_par_iter().enumerate().for_each(|(i, mut r)| {
            for j in 0..n {
                r[j] = euclidean(row(&pool, i), row(&pool, j));
            }
        });
        m
    });
    let dist = |i: usize, j: usize| match &dense {
        Some(m) => m[[i, j]],
        None => euclidean(row(&pool, i), row(&pool, j)),
    };

    let mut current: Vec<f64> = (0..n).map(|q| dist(q, first)).collect();
    let mut indices = vec![first];
    // gain of candidate j = reduction in the summed nearest distance
    let gain = |current: &[f64], j: usize| -> f64 {
        current.iter().enumerate().map(|(q, &c)| (c - dist(q, j)).max(0.0)).sum()
    };

    // Lazy greedy: gains only shrink as rows are added, so a stale gain is an
    // upper bound and a fresh gain at the top of the heap is the true argmax.
    let mut heap: BinaryHeap<Candidate> = (0..n)
        .into_par_iter()
        .filter(|&j| j != first)
        .map(|j| Candidate { gain: gain(&current, j), index: j, step: 1 })
        .collect::<Vec<_>>()
        .into();
    while indices.len() < budget {
        let step = indices.len();
        let top = heap.pop().expect("budget is at most the pool size");
        if top.step != step {
            heap.push(Candidate { gain: gain(&current, top.index), step, ..top });
            continue;
        }
        indices.push(top.index);
        for (q, c) in current.iter_mut().enumerate() {
            *c = c.min(dist(q, top.index));
        }
    }
    SelectionResult::traced(pool, NAME, seed, indices)
}

/// Heap entry ordered by gain, then by smaller index.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    gain: f64,
    index: usize,
    /// Selection size when `gain` was computed.
    step: usize,
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain.total_cmp(&other.gain).then_with(|| other.index.cmp(&self.index))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

#[derive(Debug, Clone, Default)]
pub struct FacilityLocation {
    pub start_index: Option<usize>,
}

impl Sampler for FacilityLocation {
    fn name(&self) -> &str {
        NAME
    }

    fn select(&self, pool: ArrayView2<'_, f64>, budget: usize, seed: u64) -> Result<SelectionResult> {
        facility_location(pool, budget, seed, self.start_index)
    }
}
