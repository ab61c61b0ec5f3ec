//! Cross-validated grid search for `(gamma, lambda)`.
//!
//! For every training-set size a seeded random subset is drawn, k-fold
//! cross-validation scores each grid cell by mean absolute error, and the best
//! cell wins. The final pair is the geometric mean of the per-size winners
//! (the arithmetic mean is reported alongside).

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use super::krr::{krr_fit, krr_predict};
use crate::dataset::Dataset;
use crate::seed::{child_seed, rng};
use crate::{Error, Result};

/// `points` values log-uniformly spaced from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.log10(), hi.log10());
            (0..points)
                .map(|i| match i {
                    0 => lo,
                    i if i == points - 1 => hi,
                    i => 10f64.powf(a + (b - a) * i as f64 / (points - 1) as f64),
                })
                .collect()
        }
    }
}

/// Twelve log-spaced values from 1e-14 to 1e-2, used for both hyperparameters.
pub fn default_grid() -> Vec<f64> {
    log_grid(1e-14, 1e-2, 12)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridWinner {
    pub train_size: usize,
    pub gamma: f64,
    pub lambda: f64,
    pub mae: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSearch {
    /// Geometric mean of the per-size winning gammas.
    pub gamma: f64,
    /// Geometric mean of the per-size winning lambdas.
    pub lambda: f64,
    pub arithmetic_gamma: f64,
    pub arithmetic_lambda: f64,
    pub winners: Vec<GridWinner>,
}

fn mae(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() / a.len() as f64
}

fn geometric_mean(v: &[f64]) -> f64 {
    if v.contains(&0.0) {
        return 0.0;
    }
    (v.iter().map(|x| x.ln()).sum::<f64>() / v.len() as f64).exp()
}

pub fn grid_search_cv(
    pool: &Dataset,
    train_sizes: &[usize],
    gamma_grid: &[f64],
    lambda_grid: &[f64],
    folds: usize,
    repeats: usize,
    seed: u64,
) -> Result<GridSearch> {
    pool.require_labels()?;
    if gamma_grid.is_empty() || lambda_grid.is_empty() || train_sizes.is_empty() {
        return Err(Error::InvalidArgument("grids and train sizes must be non-empty".into()));
    }
    if folds < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 folds, got {folds}")));
    }
    if repeats < 1 {
        return Err(Error::InvalidArgument("need at least one repeat".into()));
    }
    let cells: Vec<(f64, f64)> = gamma_grid.iter().flat_map(|&g| lambda_grid.iter().map(move |&l| (g, l))).collect();

    let mut winners = Vec::with_capacity(train_sizes.len());
    for &size in train_sizes {
        if size < folds || size > pool.n() {
            return Err(Error::InvalidArgument(format!(
                "train size {size} must be at least the fold count {folds} and at most the pool size {}",
                pool.n()
            )));
        }
        // fold splits, one per repeat
        let splits: Vec<Vec<(Dataset, Dataset)>> = (0..repeats)
            .map(|r| {
                let s = child_seed(seed, &[b"cv", &(size as u64).to_le_bytes(), &(r as u64).to_le_bytes()]);
                let mut order: Vec<usize> = (0..pool.n()).collect();
                order.shuffle(&mut rng(s));
                order.truncate(size);
                (0..folds)
                    .map(|f| {
                        let lo = f * size / folds;
                        let hi = (f + 1) * size / folds;
                        let held: Vec<usize> = order[lo..hi].to_vec();
                        let kept: Vec<usize> = order[..lo].iter().chain(&order[hi..]).copied().collect();
                        Ok((pool.subset(&kept)?, pool.subset(&held)?))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;

        let scores: Vec<f64> = cells
            .par_iter()
            .map(|&(g, l)| {
                let mut total = 0.0;
                let mut count = 0usize;
                for (train, test) in splits.iter().flatten() {
                    let Ok(model) = krr_fit(train, g, l) else {
                        return f64::INFINITY;
                    };
                    let Ok(pred) = krr_predict(&model, test.features()) else {
                        return f64::INFINITY;
                    };
                    total += mae(test.labels().expect("labelled"), &pred);
                    count += 1;
                }
                total / count as f64
            })
            .collect();

        let (best, score) =
            scores.iter().enumerate().fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
        if !score.is_finite() {
            return Err(Error::Degenerate(format!("every grid cell failed to fit at train size {size}")));
        }
        winners.push(GridWinner { train_size: size, gamma: cells[best].0, lambda: cells[best].1, mae: score });
    }

    let gammas: Vec<f64> = winners.iter().map(|w| w.gamma).collect();
    let lambdas: Vec<f64> = winners.iter().map(|w| w.lambda).collect();
    let n = winners.len() as f64;
    Ok(GridSearch {
        gamma: geometric_mean(&gammas),
        lambda: geometric_mean(&lambdas),
        arithmetic_gamma: gammas.iter().sum::<f64>() / n,
        arithmetic_lambda: lambdas.iter().sum::<f64>() / n,
        winners,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regression::gaussian_kernel_matrix;
    use ndarray::Array2;
    use rand::Rng;

    #[test]
    fn default_grid_endpoints() {
        let g = default_grid();
        assert_eq!(g.len(), 12);
        assert_eq!(g[0], 1e-14);
        assert_eq!(g[11], 1e-2);
        for w in g.windows(2) {
            let ratio = (w[1] / w[0]).log10();
            assert!((ratio - 12.0 / 11.0).abs() < 1e-9);
        }
    }

    fn pool(n: usize, seed: u64) -> Dataset {
        let mut r = rng(seed);
        let x = Array2::from_shape_simple_fn((n, 2), || r.random::<f64>());
        let y = x.rows().into_iter().map(|r| (3.0 * r[0]).sin() + r[1]).collect();
        Dataset::new(x, Some(y), None, "t").unwrap()
    }

    #[test]
    fn single_cell_wins_trivially() {
        let r = grid_search_cv(&pool(60, 1), &[20, 40], &[2.0], &[1e-4], 4, 1, 3).unwrap();
        assert!((r.gamma - 2.0).abs() < 1e-15);
        assert!((r.lambda - 1e-4).abs() < 1e-19);
        assert_eq!(r.winners.len(), 2);
    }

    #[test]
    fn degenerate_folds_rejected() {
        assert!(grid_search_cv(&pool(30, 1), &[3], &[1.0], &[1e-3], 5, 1, 0).is_err());
        assert!(grid_search_cv(&pool(30, 1), &[10], &[1.0], &[1e-3], 1, 1, 0).is_err());
        assert!(grid_search_cv(&pool(30, 1), &[10], &[], &[1e-3], 2, 1, 0).is_err());
    }

    #[test]
    fn geometric_mean_of_winners() {
        assert!((geometric_mean(&[1e-2, 1e-6]) - 1e-4).abs() < 1e-18);
    }

    #[test]
    fn recovers_generating_width() {
        // target drawn from the span of Gaussian bumps with a known width
        let gamma0 = 8.0;
        let mut r = rng(21);
        let centers = Array2::from_shape_simple_fn((12, 2), || r.random::<f64>());
        let coef: Vec<f64> = (0..12).map(|_| r.random_range(-1.0..1.0)).collect();
        let x = Array2::from_shape_simple_fn((300, 2), || r.random::<f64>());
        let y: Vec<f64> = x
            .rows()
            .into_iter()
            .map(|p| {
                centers
                    .rows()
                    .into_iter()
                    .zip(&coef)
                    .map(|(c, a)| a * (-gamma0 * ((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2))).exp())
                    .sum()
            })
            .collect();
        let ds = Dataset::new(x, Some(y), None, "gp").unwrap();
        let gammas = log_grid(0.5, 128.0, 9); // factor-2 steps
        let res = grid_search_cv(&ds, &[150], &gammas, &[1e-8], 5, 2, 4).unwrap();
        let step = (res.gamma / gamma0).log2().abs();
        assert!(step <= 1.0 + 1e-9, "selected gamma {}", res.gamma);
        let _ = gaussian_kernel_matrix;
    }
}
