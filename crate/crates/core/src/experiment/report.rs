use std::collections::HashMap;
use std::io::Write;

use serde::Serialize;

use super::config::Metric;
use crate::{Error, Result};

/// One metric value of one cell. `value` is `None` when the cell failed,
/// with the reason in `error`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRow {
    pub strategy: String,
    pub budget: f64,
    pub repeat: usize,
    pub seed: u64,
    pub metric: Metric,
    pub value: Option<f64>,
    pub error: Option<String>,
}

/// Mean and population standard deviation over the successful rows of a
/// group; both are `None` when every row failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub strategy: String,
    pub budget: f64,
    pub metric: Metric,
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub count: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    /// SHA-256 of the config serialized as JSON, hex encoded.
    pub config_hash: String,
    pub version: String,
    pub dataset: String,
    pub pool_size: usize,
    pub gamma: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub rows: Vec<RunRow>,
    pub aggregates: Vec<Aggregate>,
    pub provenance: Provenance,
}

/// Group rows by (strategy, budget, metric) in order of first appearance.
pub fn aggregate_runs(rows: &[RunRow]) -> Result<Vec<Aggregate>> {
    if rows.is_empty() {
        return Err(Error::Empty("no rows to aggregate".into()));
    }
    let mut order: Vec<(&str, u64, Metric)> = Vec::new();
    let mut groups: HashMap<(&str, u64, Metric), Vec<&RunRow>> = HashMap::new();
    for r in rows {
        let key = (r.strategy.as_str(), r.budget.to_bits(), r.metric);
        groups
            .entry(key)
            .or_insert_with(|| {
                order.push(key);
                Vec::new()
            })
            .push(r);
    }
    Ok(order
        .into_iter()
        .map(|key| {
            let group = &groups[&key];
            let ok: Vec<f64> = group.iter().filter_map(|r| r.value).collect();
            let (mean, std) = if ok.is_empty() {
                (None, None)
            } else {
                let mean = ok.iter().sum::<f64>() / ok.len() as f64;
                let var = ok.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / ok.len() as f64;
                (Some(mean), Some(var.sqrt()))
            };
            Aggregate {
                strategy: key.0.to_string(),
                budget: f64::from_bits(key.1),
                metric: key.2,
                mean,
                std,
                count: group.len(),
                failures: group.len() - ok.len(),
            }
        })
        .collect())
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "NaN".to_string(), |x| x.to_string())
}

/// Long-format rows: `strategy,budget,seed,metric,value`, failed cells as `NaN`.
pub fn write_rows_csv<W: Write>(report: &ExperimentReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["strategy", "budget", "seed", "metric", "value"])?;
    for r in &report.rows {
        w.write_record([
            r.strategy.clone(),
            r.budget.to_string(),
            r.seed.to_string(),
            r.metric.to_string(),
            cell(r.value),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

/// `strategy,budget,metric,mean,std`.
pub fn write_aggregates_csv<W: Write>(report: &ExperimentReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["strategy", "budget", "metric", "mean", "std"])?;
    for a in &report.aggregates {
        w.write_record([a.strategy.clone(), a.budget.to_string(), a.metric.to_string(), cell(a.mean), cell(a.std)])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}
