use ndarray::ArrayView2;

use super::fps;
use super::random::draw;
use super::{check_budget, Coverage, Sampler, SelectionResult};
use crate::{seed, Error, Result};

pub const NAME: &str = "fps_then_random";

/// Farthest point sampling for the first `ceil(switch_fraction * n)` rows
/// (capped at the budget), then uniform sampling from the remaining rows.
pub fn fps_then_random(
    pool: ArrayView2<'_, f64>,
    budget: usize,
    switch_fraction: f64,
    seed: u64,
) -> Result<SelectionResult> {
    check_budget(&pool, budget)?;
    if !(switch_fraction > 0.0 && switch_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!("switch fraction must lie in (0, 1), got {switch_fraction}")));
    }
    let n = pool.nrows();
    let switch_at = ((switch_fraction * n as f64).ceil() as usize).clamp(1, budget);

    let head = fps::fps(pool, switch_at, seed, None)?;
    let mut cov = Coverage::new(pool)?;
    for &i in &head.indices {
        cov.add(i)?;
    }
    if budget > switch_at {
        let rest: Vec<usize> = (0..n).filter(|&i| !cov.is_selected(i)).collect();
        let picks = draw(&mut seed::rng_stream(seed, 1), rest.len(), budget - switch_at);
        for k in picks {
            cov.add(rest[k])?;
        }
    }
    debug_assert_eq!(cov.selected().len(), budget);
    let indices = cov.selected().to_vec();
    let (fill_trace, sep_trace) = cov.into_traces();
    Ok(SelectionResult { strategy: NAME.into(), seed, indices, fill_trace, sep_trace })
}

#[derive(Debug, Clone)]
pub struct FpsThenRandom {
    pub switch_fraction: f64,
}

impl Sampler for FpsThenRandom {
    fn name(&self) -> &str {
        NAME
    }

    fn select(&self, pool: ArrayView2<'_, f64>, budget: usize, seed: u64) -> Result<SelectionResult> {
        fps_then_random(pool, budget, self.switch_fraction, seed)
    }
}
