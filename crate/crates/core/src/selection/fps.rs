use ndarray::ArrayView2;
use rand::Rng;

use super::{check_budget, check_start, Coverage, Sampler, SelectionResult};
use crate::seed;
use crate::Result;

pub const NAME: &str = "fps";

/// Farthest point sampling: start from one row (seeded-uniform unless
/// `start_index` is given), then repeatedly add the unselected row farthest
/// from the current selection. O(n) extra space and at most n distance
/// evaluations per step.
pub fn fps(pool: ArrayView2<'_, f64>, budget: usize, seed: u64, start_index: Option<usize>) -> Result<SelectionResult> {
    check_budget(&pool, budget)?;
    check_start(&pool, start_index)?;
    let first = start_index.unwrap_or_else(|| seed::rng(seed).random_range(0..pool.nrows()));
    let mut cov = Coverage::new(pool)?;
    cov.add(first)?;
    extend(&mut cov, budget)?;
    let indices = cov.selected().to_vec();
    let (fill_trace, sep_trace) = cov.into_traces();
    Ok(SelectionResult { strategy: NAME.into(), seed, indices, fill_trace, sep_trace })
}

/// Grow a coverage to `budget` rows by farthest-point steps.
fn extend(cov: &mut Coverage<'_>, budget: usize) -> Result<()> {
    while cov.selected().len() < budget {
        let (next, _) = cov.farthest().expect("budget <= pool size leaves a candidate");
        cov.add(next)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Default)]
pub struct Fps {
    pub start_index: Option<usize>,
}

impl Sampler for Fps {
    fn name(&self) -> &str {
        NAME
    }

    fn select(&self, pool: ArrayView2<'_, f64>, budget: usize, seed: u64) -> Result<SelectionResult> {
        fps(pool, budget, seed, self.start_index)
    }
}
