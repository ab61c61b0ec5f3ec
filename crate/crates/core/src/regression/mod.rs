//! Gaussian-kernel ridge regression and kernel conditioning.

mod conditioning;
mod cv;
mod kernel;
mod krr;
mod persist;

pub use conditioning::{
    condition_number, conditioning_report, eigen_bounds, Conditioning, ConditioningReport, EigenBounds,
    LowerBoundParams,
};
pub use cv::{default_grid, grid_search_cv, log_grid, GridSearch, GridWinner};
pub use kernel::{cross_kernel, gaussian_kernel_matrix, kernel_lipschitz};
pub use krr::{krr_fit, krr_lipschitz_bound, krr_predict, KernelModel};
pub use persist::{load_model, read_model, save_model, write_model};
