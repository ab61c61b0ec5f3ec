use ndarray::ArrayView2;
use serde::Serialize;

use crate::distance::{check_pool, row, sq_euclidean};
use crate::{seed, Error, Result};

/// Pools up to this size are scanned over every pair.
pub const EXACT_LIMIT: usize = 2000;
const SAMPLED_PAIRS: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LipschitzEstimate {
    pub value: f64,
    /// False when pairs were subsampled; the value is then a lower estimate.
    pub exact: bool,
    pub pairs: usize,
}

/// Largest slope `|y_i - y_j| / |x_i - x_j|` over distinct pairs.
pub fn empirical_lipschitz(x: ArrayView2<'_, f64>, y: &[f64], seed: u64) -> Result<LipschitzEstimate> {
    check_pool(&x)?;
    let n = x.nrows();
    if y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: y.len() });
    }
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()));
    }
    let slope = |i: usize, j: usize| -> Result<Option<f64>> {
        let dy = (y[i] - y[j]).abs();
        let dx = sq_euclidean(row(&x, i), row(&x, j)).sqrt();
        if dx == 0.0 {
            return if dy == 0.0 { Ok(None) } else { Err(Error::InfiniteSlope(i.min(j), i.max(j))) };
        }
        Ok(Some(dy / dx))
    };
    let mut best = 0.0f64;
    let mut pairs = 0usize;
    if n <= EXACT_LIMIT {
        for i in 0..n {
            for j in 0..i {
                if let Some(s) = slope(i, j)? {
                    best = best.max(s);
                }
                pairs += 1;
            }
        }
        return Ok(LipschitzEstimate { value: best, exact: true, pairs });
    }
    use rand::Rng;
    let mut rng = seed::rng(seed);
    while pairs < SAMPLED_PAIRS {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i == j {
            continue;
        }
        if let Some(s) = slope(i, j)? {
            best = best.max(s);
        }
        pairs += 1;
    }
    Ok(LipschitzEstimate { value: best, exact: false, pairs })
}
