use ndarray::ArrayView2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distance::{check_pool, row, sq_euclidean};
use crate::parallel::MIN_PAR_ROWS;
use crate::{Error, Result};

fn check_indices(pool: &ArrayView2<'_, f64>, selected: &[usize]) -> Result<()> {
    check_pool(pool)?;
    match selected.iter().find(|&&i| i >= pool.nrows()) {
        Some(&index) => Err(Error::IndexOutOfRange { index, pool: pool.nrows() }),
        None => Ok(()),
    }
}

/// Largest distance from a pool row to its nearest selected row.
pub fn fill_distance(pool: ArrayView2<'_, f64>, selected: &[usize]) -> Result<f64> {
    if selected.is_empty() {
        return Err(Error::Empty("fill distance needs at least one selected point".into()));
    }
    check_indices(&pool, selected)?;
    let nearest = |i: usize| {
        let x = row(&pool, i);
        selected.iter().map(|&j| sq_euclidean(x, row(&pool, j))).fold(f64::INFINITY, f64::min)
    };
    let worst = if pool.nrows() * selected.len() >= MIN_PAR_ROWS {
        (0..pool.nrows()).into_par_iter().map(nearest).reduce(|| 0.0, f64::max)
    } else {
        (0..pool.nrows()).map(nearest).fold(0.0, f64::max)
    };
    Ok(worst.sqrt())
}

/// Half the smallest distance between two distinct selected rows.
pub fn separation_distance(pool: ArrayView2<'_, f64>, selected: &[usize]) -> Result<f64> {
    if selected.len() < 2 {
        return Err(Error::InvalidArgument("separation distance needs at least two selected points".into()));
    }
    check_indices(&pool, selected)?;
    let mut min_sq = f64::INFINITY;
    for (k, &a) in selected.iter().enumerate() {
        for &b in &selected[..k] {
            min_sq = min_sq.min(sq_euclidean(row(&pool, a), row(&pool, b)));
        }
    }
    Ok(0.5 * min_sq.sqrt())
}

/// Nearest-neighbour distance of every pool row, with their mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NnDistances {
    pub distances: Vec<f64>,
    pub mean: f64,
}

pub fn nn_distances(pool: ArrayView2<'_, f64>) -> Result<NnDistances> {
    check_pool(&pool)?;
    let n = pool.nrows();
    if n < 2 {
        return Err(Error::InvalidArgument("nearest neighbours need at least two points".into()));
    }
    let nearest = |i: usize| {
        let x = row(&pool, i);
        (0..n).filter(|&j| j != i).map(|j| sq_euclidean(x, row(&pool, j))).fold(f64::INFINITY, f64::min).sqrt()
    };
    let distances: Vec<f64> =
        if n >= 256 { (0..n).into_par_iter().map(nearest).collect() } else { (0..n).map(nearest).collect() };
    let mean = distances.iter().sum::<f64>() / n as f64;
    Ok(NnDistances { distances, mean })
}
