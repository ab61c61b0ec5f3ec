//! Error metrics, the fill-distance error bound, and data diagnostics.

mod bound;
mod correlation;
mod lipschitz;
mod metrics;

pub use bound::{bound_check, bound_check_with, theorem_bound, training_max_error, BoundReport};
pub use correlation::{
    pairwise_distance_correlation, pearson, spearman, CorrelationReport, Verdict, DEFAULT_MAX_PAIRS,
    NEGLIGIBLE_THRESHOLD,
};
pub use lipschitz::{empirical_lipschitz, LipschitzEstimate, EXACT_LIMIT};
pub use metrics::{mae, maxae};
