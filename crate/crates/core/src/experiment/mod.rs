//! Seeded sweeps over strategies × budgets × repeats.
//!
//! Each cell selects a training set, fits the pinned kernel model on it and
//! scores the requested metrics on every unselected row. Cells run in
//! parallel; the report is assembled in plan order, so its bytes depend only
//! on the config and the dataset.

mod config;
mod report;
mod run;

pub use config::{
    budget_count, load_config, DatasetRef, ExperimentConfig, GridSpec, Metric, ModelSpec, DEFAULT_BUDGETS,
    DEFAULT_REPEATS,
};
pub use report::{
    aggregate_runs, write_aggregates_csv, write_rows_csv, Aggregate, ExperimentReport, Provenance, RunRow,
};
pub use run::{plan, prepare_dataset, resolve_model, run_experiment, run_experiment_on, Cell, ModelParams};
