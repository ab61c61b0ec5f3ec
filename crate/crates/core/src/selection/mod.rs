//! Training-set samplers and the geometry they optimise.
//!
//! Every sampler implements [`Sampler`] and is constructed by name from a
//! [`StrategySpec`] through a [`SamplerRegistry`]. Distances are Euclidean
//! and all ties are broken towards the smallest row index.

mod coverage;
mod facility;
mod fps;
mod hybrid;
mod kmedoids;
mod metrics;
mod oracle;
mod random;
mod registry;

pub use facility::{facility_location, facility_objective, FacilityLocation};
pub use fps::{fps, Fps};
pub use hybrid::{fps_then_random, FpsThenRandom};
pub use kmedoids::{kmedoidspp, KMedoidsPlusPlus, DEFAULT_MAX_ITERS};
pub use metrics::{fill_distance, nn_distances, separation_distance, NnDistances};
pub use oracle::{kcenter_bruteforce, maxsep_bruteforce, Optimum, MAX_SUBSETS};
pub use random::{random_select, RandomSampler};
pub use registry::{SamplerRegistry, StrategySpec};

pub(crate) use coverage::Coverage;

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Ordered selection plus the fill distance after every step and the
/// separation distance from the second step onward.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    pub strategy: String,
    pub seed: u64,
    pub indices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fill_trace: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sep_trace: Vec<f64>,
}

impl SelectionResult {
    /// Build a result for `indices`, computing both traces from scratch-equivalent
    /// incremental updates.
    pub fn traced(
        pool: ArrayView2<'_, f64>,
        strategy: impl Into<String>,
        seed: u64,
        indices: Vec<usize>,
    ) -> Result<Self> {
        let mut cov = Coverage::new(pool)?;
        for &i in &indices {
            cov.add(i)?;
        }
        let (fill_trace, sep_trace) = cov.into_traces();
        Ok(SelectionResult { strategy: strategy.into(), seed, indices, fill_trace, sep_trace })
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn final_fill(&self) -> Option<f64> {
        self.fill_trace.last().copied()
    }

    pub fn final_separation(&self) -> Option<f64> {
        self.sep_trace.last().copied()
    }

    /// Drop the traces, keeping only strategy, seed and indices.
    pub fn without_traces(mut self) -> Self {
        self.fill_trace.clear();
        self.sep_trace.clear();
        self
    }
}

/// A training-set selection strategy.
pub trait Sampler: Send + Sync {
    /// Registry tag, also recorded in every [`SelectionResult`].
    fn name(&self) -> &str;

    fn select(&self, pool: ArrayView2<'_, f64>, budget: usize, seed: u64) -> Result<SelectionResult>;
}

pub(crate) fn check_budget(pool: &ArrayView2<'_, f64>, budget: usize) -> Result<()> {
    crate::distance::check_pool(pool)?;
    if budget < 1 || budget > pool.nrows() {
        return Err(Error::InvalidBudget { budget, pool: pool.nrows() });
    }
    Ok(())
}

pub(crate) fn check_start(pool: &ArrayView2<'_, f64>, start: Option<usize>) -> Result<()> {
    match start {
        Some(index) if index >= pool.nrows() => Err(Error::IndexOutOfRange { index, pool: pool.nrows() }),
        _ => Ok(()),
    }
}
