//! Training-set selection for regression by farthest point sampling.
//!
//! The crate is organised around a pool of unlabelled feature vectors from
//! which a small budget of points is chosen for labelling:
//!
//! - [`dataset`]: CSV ingestion, Coulomb-matrix featurization, preprocessing
//!   and a synthetic generator with known Lipschitz constant and noise level.
//! - [`selection`]: farthest point sampling and the baseline samplers, each
//!   behind the [`selection::Sampler`] trait and looked up by name through
//!   [`selection::SamplerRegistry`]; fill and separation distances; exhaustive
//!   k-center and max-separation oracles for small instances.
//! - [`regression`]: Gaussian-kernel ridge regression, its Lipschitz bound,
//!   cross-validated hyperparameter search and kernel conditioning.
//! - [`analysis`]: error metrics, the fill-distance error bound and the
//!   pairwise-distance correlation diagnostic.
//! - [`experiment`]: seeded sweeps over strategies and budgets with CSV output.

pub mod analysis;
pub mod dataset;
pub mod distance;
pub mod error;
pub mod experiment;
pub mod parallel;
pub mod regression;
pub mod seed;
pub mod selection;

pub use dataset::Dataset;
pub use error::{Error, Result};
pub use regression::KernelModel;

pub use selection::{SamplerRegistry, SelectionResult, StrategySpec};
