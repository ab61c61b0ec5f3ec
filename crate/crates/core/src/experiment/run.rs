use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::{budget_count, DatasetRef, ExperimentConfig, Metric, ModelSpec};
use super::report::{aggregate_runs, ExperimentReport, Provenance, RunRow};
use crate::analysis::{mae, maxae};
use crate::dataset::{load_dataset, minmax_normalize, remove_zero_variance, synth_lipschitz, LabelColumn};
use crate::regression::{condition_number, default_grid, gaussian_kernel_matrix, grid_search_cv, krr_fit, krr_predict};
use crate::seed::child_seed;
use crate::selection::{fill_distance, separation_distance, SamplerRegistry};
use crate::{Dataset, Error, Result};

/// One (strategy, budget, repeat) point of the sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    /// Position of the strategy in the config.
    pub strategy: usize,
    pub label: String,
    pub budget: f64,
    pub count: usize,
    pub repeat: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub gamma: f64,
    pub lambda: f64,
}

/// Every cell in report order: strategies, then budgets, then repeats.
pub fn plan(cfg: &ExperimentConfig, n: usize) -> Result<Vec<Cell>> {
    let counts = cfg
        .budgets
        .iter()
        .map(|&b| budget_count(b, n).map_err(|e| Error::Config(format!("budgets: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let mut cells = Vec::with_capacity(cfg.strategies.len() * counts.len() * cfg.repeats);
    for (s, spec) in cfg.strategies.iter().enumerate() {
        let label = spec.label();
        for (&budget, &count) in cfg.budgets.iter().zip(&counts) {
            for repeat in 0..cfg.repeats {
                let seed = child_seed(
                    cfg.master_seed,
                    &[label.as_bytes(), &budget.to_le_bytes(), &(repeat as u64).to_le_bytes()],
                );
                cells.push(Cell { strategy: s, label: label.clone(), budget, count, repeat, seed });
            }
        }
    }
    Ok(cells)
}

pub fn prepare_dataset(cfg: &ExperimentConfig) -> Result<Dataset> {
    let needs_labels = cfg.metrics.iter().any(|m| m.needs_model()) || matches!(cfg.model, ModelSpec::GridSearch(_));
    match &cfg.dataset {
        DatasetRef::Synth(s) => Ok(synth_lipschitz(s)?.dataset),
        DatasetRef::Csv { path, label, normalize } => {
            let label: LabelColumn = label.parse().expect("infallible");
            let ds = load_dataset(path, needs_labels, &label)?;
            if !normalize {
                return Ok(ds);
            }
            let (ds, _) = remove_zero_variance(&ds)?;
            Ok(minmax_normalize(&ds)?.0)
        }
    }
}

/// The pinned hyperparameters; a grid search runs here, once, on the whole pool.
pub fn resolve_model(cfg: &ExperimentConfig, pool: &Dataset) -> Result<ModelParams> {
    match &cfg.model {
        ModelSpec::Fixed { gamma, lambda } => Ok(ModelParams { gamma: *gamma, lambda: *lambda }),
        ModelSpec::GridSearch(g) => {
            let gammas = g.gamma_grid.clone().unwrap_or_else(default_grid);
            let lambdas = g.lambda_grid.clone().unwrap_or_else(default_grid);
            let seed = child_seed(cfg.master_seed, &[b"grid_search"]);
            let found = grid_search_cv(pool, &g.train_sizes, &gammas, &lambdas, g.folds, g.repeats, seed)?;
            Ok(ModelParams { gamma: found.gamma, lambda: found.lambda })
        }
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate(&SamplerRegistry::builtin())?;
    let pool = prepare_dataset(cfg)?;
    run_experiment_on(cfg, &pool)
}

/// Run the sweep on an already loaded pool; the config's dataset entry is
/// only recorded in the provenance.
pub fn run_experiment_on(cfg: &ExperimentConfig, pool: &Dataset) -> Result<ExperimentReport> {
    let registry = SamplerRegistry::builtin();
    cfg.validate(&registry)?;
    if cfg.metrics.iter().any(|m| m.needs_model()) {
        pool.require_labels()?;
    }
    let cells = plan(cfg, pool.n())?;
    let params = resolve_model(cfg, pool)?;
    let samplers = cfg.strategies.iter().map(|s| registry.build(s)).collect::<Result<Vec<_>>>()?;

    let rows: Vec<RunRow> = cells
        .par_iter()
        .map(|cell| {
            let values = match evaluate(pool, samplers[cell.strategy].as_ref(), cell, &cfg.metrics, params) {
                Ok(v) => v,
                Err(e) => vec![Err(e.to_string()); cfg.metrics.len()],
            };
            cfg.metrics
                .iter()
                .zip(values)
                .map(|(&metric, v)| RunRow {
                    strategy: cell.label.clone(),
                    budget: cell.budget,
                    repeat: cell.repeat,
                    seed: cell.seed,
                    metric,
                    error: v.as_ref().err().cloned(),
                    value: v.ok(),
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let aggregates = aggregate_runs(&rows)?;
    let config_json = serde_json::to_vec(cfg)?;
    let provenance = Provenance {
        config_hash: Sha256::digest(&config_json).iter().map(|b| format!("{b:02x}")).collect(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        dataset: pool.source.clone(),
        pool_size: pool.n(),
        gamma: params.gamma,
        lambda: params.lambda,
    };
    Ok(ExperimentReport { rows, aggregates, provenance })
}

type Values = Vec<std::result::Result<f64, String>>;

/// Score one cell. An `Err` fails every metric of the cell; per-metric
/// failures (a singular kernel, a failed fit) only fail that metric.
fn evaluate(
    pool: &Dataset,
    sampler: &dyn crate::selection::Sampler,
    cell: &Cell,
    metrics: &[Metric],
    params: ModelParams,
) -> Result<Values> {
    let selection = sampler.select(pool.features(), cell.count, cell.seed)?;
    let train_idx = &selection.indices;
    let held_out = pool.complement(train_idx);
    let mut in_train = vec![false; pool.n()];
    for &i in train_idx {
        if i >= pool.n() || std::mem::replace(&mut in_train[i], true) {
            return Err(Error::InvalidArgument(format!("selection repeats or overruns index {i}")));
        }
    }
    if train_idx.len() != cell.count
        || held_out.iter().any(|&i| in_train[i])
        || train_idx.len() + held_out.len() != pool.n()
    {
        return Err(Error::InvalidArgument("training and evaluation rows overlap".into()));
    }
    let train = pool.subset(train_idx)?;

    let needs_kernel = metrics.iter().any(|m| matches!(m, Metric::CondRegularized | Metric::CondUnregularized));
    let kernel = needs_kernel.then(|| gaussian_kernel_matrix(train.features(), params.gamma)).transpose()?;
    let needs_model = metrics.iter().any(|m| m.needs_model());
    let predictions = needs_model.then(|| -> std::result::Result<(Vec<f64>, Vec<f64>), String> {
        if held_out.is_empty() {
            return Err("no unselected rows to evaluate".into());
        }
        let model = krr_fit(&train, params.gamma, params.lambda).map_err(|e| e.to_string())?;
        let test = pool.subset(&held_out).map_err(|e| e.to_string())?;
        let pred = krr_predict(&model, test.features()).map_err(|e| e.to_string())?;
        Ok((test.require_labels().map_err(|e| e.to_string())?.to_vec(), pred))
    });

    let cond = |lambda: f64| -> std::result::Result<f64, String> {
        let mut k = kernel.clone().expect("kernel computed");
        k.diag_mut().mapv_inplace(|v| v + lambda);
        let c = condition_number(k.view()).map_err(|e| e.to_string())?;
        c.cond.ok_or_else(|| format!("kernel matrix numerically singular (lambda_min = {:e})", c.lambda_min))
    };
    let scored = |f: fn(&[f64], &[f64]) -> Result<f64>| match predictions.as_ref().expect("predictions computed") {
        Ok((y, p)) => f(y, p).map_err(|e| e.to_string()),
        Err(e) => Err(e.clone()),
    };
    Ok(metrics
        .iter()
        .map(|m| match m {
            Metric::FillDistance => fill_distance(pool.features(), train_idx).map_err(|e| e.to_string()),
            Metric::SepDistance => separation_distance(pool.features(), train_idx).map_err(|e| e.to_string()),
            Metric::CondRegularized => cond(params.lambda),
            Metric::CondUnregularized => cond(0.0),
            Metric::Maxae => scored(maxae),
            Metric::Mae => scored(mae),
        })
        .collect())
}
