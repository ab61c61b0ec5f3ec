use ndarray::ArrayView2;

use super::{check_budget, Sampler, SelectionResult};
use crate::seed;
use crate::Result;

pub const NAME: &str = "random";

/// `budget` distinct rows drawn uniformly without replacement.
pub fn random_select(pool: ArrayView2<'_, f64>, budget: usize, seed: u64) -> Result<SelectionResult> {
    check_budget(&pool, budget)?;
    let indices = draw(&mut seed::rng(seed), pool.nrows(), budget);
    SelectionResult::traced(pool, NAME, seed, indices)
}

pub(crate) fn draw(rng: &mut seed::Rng, n: usize, amount: usize) -> Vec<usize> {
    rand::seq::index::sample(rng, n, amount).into_vec()
}

#[derive(Debug, Clone, Default)]
pub struct RandomSampler;

impl Sampler for RandomSampler {
    fn name(&self) -> &str {
        NAME
    }

    fn select(&self, pool: ArrayView2<'_, f64>, budget: usize, seed: u64) -> Result<SelectionResult> {
        random_select(pool, budget, seed)
    }
}
