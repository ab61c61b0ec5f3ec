use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, Context, Result};
use fillgap::analysis::{bound_check_with, mae, maxae, pairwise_distance_correlation};
use fillgap::dataset::{load_dataset, save_dataset, synth_lipschitz, LabelColumn, SynthConfig};
use fillgap::experiment::{
    budget_count, load_config, plan, prepare_dataset, run_experiment_on, write_aggregates_csv, write_rows_csv,
};
use fillgap::regression::{conditioning_report, krr_fit, krr_lipschitz_bound, krr_predict, load_model, save_model};
use fillgap::selection::nn_distances;
use fillgap::{Dataset, SamplerRegistry, SelectionResult, StrategySpec};
use serde_json::json;

use crate::{Command, DataArgs};

/// A bad invocation that clap could not catch; exits with 1.
#[derive(Debug)]
pub struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<UsageError>().is_some() {
        return 1;
    }
    match e.downcast_ref::<fillgap::Error>() {
        Some(
            fillgap::Error::UnknownStrategy { .. } | fillgap::Error::Config(_) | fillgap::Error::InvalidBudget { .. },
        ) => 1,
        _ => 2,
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Budget {
    Count(usize),
    Fraction(f64),
}

impl FromStr for Budget {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if let Ok(n) = s.parse::<usize>() {
            return Ok(Budget::Count(n));
        }
        match s.parse::<f64>() {
            Ok(f) if f > 0.0 && f <= 1.0 => Ok(Budget::Fraction(f)),
            _ => Err(format!("`{s}` is neither a row count nor a fraction in (0, 1]")),
        }
    }
}

impl Budget {
    fn rows(self, n: usize) -> fillgap::Result<usize> {
        match self {
            Budget::Count(c) => Ok(c),
            Budget::Fraction(f) => budget_count(f, n),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Constants {
    lip_target: f64,
    eps: f64,
    lip_label: f64,
}

impl FromStr for Constants {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (mut lip_target, mut eps, mut lip_label) = (None, None, 1.0);
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| format!("`{part}` is not key=value"))?;
            let value: f64 = value.trim().parse().map_err(|_| format!("`{value}` is not a number"))?;
            match key.trim() {
                "lip_target" => lip_target = Some(value),
                "eps" => eps = Some(value),
                "lip_label" => lip_label = value,
                other => return Err(format!("unknown constant `{other}` (expected lip_target, eps, lip_label)")),
            }
        }
        Ok(Constants { lip_target: lip_target.ok_or("missing lip_target")?, eps: eps.ok_or("missing eps")?, lip_label })
    }
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Select { data, strategy, budget, seed, switch_fraction, start, max_iters, trace, out } => {
            let spec = StrategySpec { kind: strategy, switch_fraction, start_index: start, max_iters };
            let sampler = SamplerRegistry::builtin().build(&spec)?;
            let pool = load(&data, None)?;
            let rows = budget.rows(pool.n())?;
            let mut sel = sampler.select(pool.features(), rows, seed)?;
            if !trace {
                sel = sel.without_traces();
            }
            emit(out.as_deref(), &serde_json::to_string_pretty(&sel)?)
        }
        Command::Fit { data, selection, gamma, lambda, c_d, out } => {
            let pool = load(&data, Some("last"))?;
            let train = match &selection {
                Some(p) => pool.subset(&read_selection(p)?.indices)?,
                None => pool,
            };
            let model = krr_fit(&train, gamma, lambda)?;
            let report = conditioning_report(train.features(), gamma, lambda, c_d)?;
            let pred = krr_predict(&model, train.features())?;
            let summary = json!({
                "rows": model.b(),
                "dimension": model.d(),
                "gamma": gamma,
                "lambda": lambda,
                "lipschitz_bound": krr_lipschitz_bound(&model),
                "train_max_error": maxae(train.require_labels()?, &pred)?,
                "conditioning": report,
            });
            save_model(&model, &out)?;
            emit(None, &serde_json::to_string_pretty(&summary)?)
        }
        Command::Predict { model, data, out } => {
            let model = load_model(&model)?;
            let pool = load(&data, None)?;
            let pred = krr_predict(&model, pool.features())?;
            emit(out.as_deref(), &serde_json::to_string_pretty(&json!({ "predictions": pred }))?)
        }
        Command::Eval { model, data, selection } => {
            let model = load_model(&model)?;
            let pool = load(&data, Some("last"))?;
            let test = match &selection {
                Some(p) => pool.subset(&pool.complement(&read_selection(p)?.indices))?,
                None => pool,
            };
            if test.n() == 0 {
                return Err(anyhow!("no rows left to evaluate"));
            }
            let pred = krr_predict(&model, test.features())?;
            let y = test.require_labels()?;
            let summary = json!({ "rows": test.n(), "maxae": maxae(y, &pred)?, "mae": mae(y, &pred)? });
            emit(None, &serde_json::to_string_pretty(&summary)?)
        }
        Command::Bound { data, selection, model, constants } => {
            let pool = load(&data, Some("last"))?;
            let sel = read_selection(&selection)?;
            let model = load_model(&model)?;
            let report =
                bound_check_with(&pool, &sel, &model, constants.lip_target, constants.eps, constants.lip_label)?;
            emit(None, &serde_json::to_string_pretty(&report)?)
        }
        Command::Corr { data, max_pairs, seed } => {
            let pool = load(&data, Some("last"))?;
            let report = pairwise_distance_correlation(pool.features(), pool.require_labels()?, max_pairs, seed)?;
            emit(None, &serde_json::to_string_pretty(&report)?)
        }
        Command::Nn { data } => {
            let pool = load(&data, None)?;
            emit(None, &serde_json::to_string_pretty(&nn_distances(pool.features())?)?)
        }
        Command::Synth { n, d, lipschitz, noise, tail_fraction, seed, out } => {
            let cfg = SynthConfig { n, d, target_lipschitz: lipschitz, noise_level: noise, tail_fraction, seed };
            let s = synth_lipschitz(&cfg)?;
            save_dataset(&s.dataset, &out)?;
            let summary = json!({
                "config": cfg,
                "gradient": s.gradient.to_vec(),
                "intercept": s.intercept,
                "lipschitz": s.lipschitz,
                "noise_level": s.noise_level,
                "tail_indices": s.tail_indices,
                "bulk_median_nn": s.bulk_median_nn,
            });
            emit(None, &serde_json::to_string_pretty(&summary)?)
        }
        Command::Experiment { config, dry_run, out_dir } => experiment(&config, dry_run, &out_dir),
    }
}

fn load(args: &DataArgs, default_label: Option<&str>) -> Result<Dataset> {
    let label = args.label.as_deref().or(default_label);
    let column: LabelColumn = label.unwrap_or("last").parse().expect("infallible");
    Ok(load_dataset(&args.data, label.is_some(), &column)?)
}

fn read_selection(path: &Path) -> Result<SelectionResult> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing selection {}", path.display()))
}

/// Print to stdout, or write the whole text to `out` in one go.
fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}").and_then(|_| stdout.flush()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r.context("writing to standard output"),
            }
        }
    }
}

fn experiment(config: &Path, dry_run: bool, out_dir: &Path) -> Result<()> {
    let cfg = load_config(config)?;
    let pool = prepare_dataset(&cfg)?;
    let cells = plan(&cfg, pool.n())?;
    if dry_run {
        println!("dataset: {} ({} rows, {} features)", pool.source, pool.n(), pool.d());
        println!("{} cells, metrics: {}", cells.len(), join(cfg.metrics.iter().map(|m| m.name())));
        for c in cells.iter().filter(|c| c.repeat == 0) {
            println!("  {:<28} budget {:<6} {:>6} rows  x{} repeats", c.label, c.budget, c.count, cfg.repeats);
        }
        return Ok(());
    }
    if !out_dir.is_dir() {
        return Err(usage(format!("output directory {} does not exist", out_dir.display())));
    }
    let report = run_experiment_on(&cfg, &pool)?;
    let (mut rows, mut aggregates) = (Vec::new(), Vec::new());
    write_rows_csv(&report, &mut rows)?;
    write_aggregates_csv(&report, &mut aggregates)?;
    write_file(&out_dir.join("rows.csv"), &rows)?;
    write_file(&out_dir.join("aggregates.csv"), &aggregates)?;

    let p = &report.provenance;
    let mut table = format!(
        "dataset {} ({} rows), gamma {:e}, lambda {:e}, config {}\n",
        p.dataset,
        p.pool_size,
        p.gamma,
        p.lambda,
        &p.config_hash[..12]
    );
    let _ = writeln!(
        table,
        "{:<28} {:>8} {:<20} {:>14} {:>14} {:>8}",
        "strategy", "budget", "metric", "mean", "std", "failed"
    );
    for a in &report.aggregates {
        let num = |v: Option<f64>| v.map_or_else(|| "NaN".to_string(), |x| format!("{x:.6e}"));
        let _ = writeln!(
            table,
            "{:<28} {:>8} {:<20} {:>14} {:>14} {:>8}",
            a.strategy,
            a.budget,
            a.metric.name(),
            num(a.mean),
            num(a.std),
            a.failures
        );
    }
    emit(None, table.trim_end())
}

fn write_file(path: &PathBuf, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn join<'a>(items: impl Iterator<Item = &'a str>) -> String {
    items.collect::<Vec<_>>().join(", ")
}
