//! k-medoids with k-means++-style seeding followed by alternating
//! assignment / medoid-update rounds.

use ndarray::ArrayView2;
use rand::Rng;
use rayon::prelude::*;

use super::{check_budget, Sampler, SelectionResult};
use crate::distance::{euclidean, row, sq_euclidean};
use crate::{seed, Result};

pub const NAME: &str = "kmedoidspp";
pub const DEFAULT_MAX_ITERS: usize = 100;

pub fn kmedoidspp(pool: ArrayView2<'_, f64>, budget: usize, seed: u64, max_iters: usize) -> Result<SelectionResult> {
    check_budget(&pool, budget)?;
    let mut rng = seed::rng(seed);
    let mut medoids = plus_plus_seeds(&pool, budget, &mut rng);
    for _ in 0..max_iters {
        let clusters = assign(&pool, &medoids);
        let updated: Vec<usize> =
            clusters.par_iter().zip(medoids.par_iter()).map(|(members, &m)| best_medoid(&pool, members, m)).collect();
        if updated == medoids {
            break;
        }
        medoids = updated;
    }
    SelectionResult::traced(pool, NAME, seed, medoids)
}

/// First seed uniform, each further seed drawn with probability proportional
/// to the squared distance to the nearest chosen seed.
fn plus_plus_seeds(pool: &ArrayView2<'_, f64>, k: usize, rng: &mut seed::Rng) -> Vec<usize> {
    let n = pool.nrows();
    let mut chosen = vec![rng.random_range(0..n)];
    let mut taken = vec![false; n];
    taken[chosen[0]] = true;
    let mut weight: Vec<f64> = (0..n).map(|i| sq_euclidean(row(pool, i), row(pool, chosen[0]))).collect();
    while chosen.len() < k {
        let total: f64 = (0..n).filter(|&i| !taken[i]).map(|i| weight[i]).sum();
        let next = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for i in (0..n).filter(|&i| !taken[i]) {
                acc += weight[i];
                if weight[i] > 0.0 {
                    pick = Some(i);
                    if acc > target {
                        break;
                    }
                }
            }
            pick.expect("positive total has a positive weight")
        } else {
            // every remaining row coincides with a seed
            let free: Vec<usize> = (0..n).filter(|&i| !taken[i]).collect();
            free[rng.random_range(0..free.len())]
        };
        taken[next] = true;
        chosen.push(next);
        for (i, w) in weight.iter_mut().enumerate() {
            *w = w.min(sq_euclidean(row(pool, i), row(pool, next)));
        }
    }
    chosen
}

/// Partition rows by nearest medoid (smallest medoid position on ties). Each
/// medoid always belongs to its own cluster, so clusters are never empty.
fn assign(pool: &ArrayView2<'_, f64>, medoids: &[usize]) -> Vec<Vec<usize>> {
    let owner: Vec<usize> = (0..pool.nrows())
        .into_par_iter()
        .map(|i| {
            if let Some(pos) = medoids.iter().position(|&m| m == i) {
                return pos;
            }
            let x = row(pool, i);
            let mut best = (0, f64::INFINITY);
            for (pos, &m) in medoids.iter().enumerate() {
                let d = sq_euclidean(x, row(pool, m));
                if d < best.1 {
                    best = (pos, d);
                }
            }
            best.0
        })
        .collect();
    let mut clusters = vec![Vec::new(); medoids.len()];
    for (i, &k) in owner.iter().enumerate() {
        clusters[k].push(i);
    }
    clusters
}

/// Cluster member with the smallest summed distance to the others. The current
/// medoid is kept unless a member is strictly better; otherwise ties go to the
/// smallest index.
fn best_medoid(pool: &ArrayView2<'_, f64>, members: &[usize], current: usize) -> usize {
    let cost = |c: usize| -> f64 { members.iter().map(|&q| euclidean(row(pool, q), row(pool, c))).sum() };
    let mut best = (current, cost(current));
    for &c in members {
        let v = cost(c);
        if v < best.1 {
            best = (c, v);
        }
    }
    best.0
}

#[derive(Debug, Clone)]
pub struct KMedoidsPlusPlus {
    pub max_iters: usize,
}

impl Default for KMedoidsPlusPlus {
    fn default() -> Self {
        KMedoidsPlusPlus { max_iters: DEFAULT_MAX_ITERS }
    }
}

impl Sampler for KMedoidsPlusPlus {
    fn name(&self) -> &str {
        NAME
    }

    fn select(&self, pool: ArrayView2<'_, f64>, budget: usize, seed: u64) -> Result<SelectionResult> {
        kmedoidspp(pool, budget, seed, self.max_iters)
    }
}
