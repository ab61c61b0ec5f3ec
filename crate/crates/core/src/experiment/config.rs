use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dataset::SynthConfig;
use crate::selection::{SamplerRegistry, StrategySpec};
use crate::{Error, Result};

/// Percentages of the pool used when a config names no budgets.
pub const DEFAULT_BUDGETS: [f64; 7] = [0.01, 0.02, 0.03, 0.04, 0.05, 0.07, 0.10];
pub const DEFAULT_REPEATS: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DatasetRef {
    Csv {
        path: PathBuf,
        /// `last`, a 0-based column index or a header name.
        #[serde(default = "default_label")]
        label: String,
        /// Drop constant columns and min-max scale the rest to [0, 1].
        #[serde(default)]
        normalize: bool,
    },
    Synth(SynthConfig),
}

fn default_label() -> String {
    "last".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Fixed { gamma: f64, lambda: f64 },
    GridSearch(GridSpec),
}

/// Cross-validated search run once on the whole pool before the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub train_sizes: Vec<usize>,
    #[serde(default)]
    pub gamma_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub lambda_grid: Option<Vec<f64>>,
    #[serde(default = "default_folds")]
    pub folds: usize,
    #[serde(default = "default_grid_repeats")]
    pub repeats: usize,
}

fn default_folds() -> usize {
    5
}

fn default_grid_repeats() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Maxae,
    Mae,
    CondRegularized,
    CondUnregularized,
    FillDistance,
    SepDistance,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::Maxae,
        Metric::Mae,
        Metric::CondRegularized,
        Metric::CondUnregularized,
        Metric::FillDistance,
        Metric::SepDistance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Maxae => "maxae",
            Metric::Mae => "mae",
            Metric::CondRegularized => "cond_regularized",
            Metric::CondUnregularized => "cond_unregularized",
            Metric::FillDistance => "fill_distance",
            Metric::SepDistance => "sep_distance",
        }
    }

    /// Whether the metric scores predictions and so needs labels and a fit.
    pub fn needs_model(self) -> bool {
        matches!(self, Metric::Maxae | Metric::Mae)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: DatasetRef,
    pub strategies: Vec<StrategySpec>,
    #[serde(default = "default_budgets")]
    pub budgets: Vec<f64>,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    pub model: ModelSpec,
    #[serde(default = "default_metrics")]
    pub metrics: Vec<Metric>,
    #[serde(default)]
    pub master_seed: u64,
}

fn default_budgets() -> Vec<f64> {
    DEFAULT_BUDGETS.to_vec()
}

fn default_repeats() -> usize {
    DEFAULT_REPEATS
}

fn default_metrics() -> Vec<Metric> {
    vec![Metric::Maxae, Metric::Mae]
}

fn config_err(field: &str, msg: impl fmt::Display) -> Error {
    Error::Config(format!("{field}: {msg}"))
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        cfg.validate(&SamplerRegistry::builtin())?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Check every field that can be checked without loading the dataset.
    pub fn validate(&self, registry: &SamplerRegistry) -> Result<()> {
        if self.strategies.is_empty() {
            return Err(config_err("strategies", "at least one strategy is required"));
        }
        let mut labels = HashSet::new();
        for spec in &self.strategies {
            registry.build(spec).map_err(|e| config_err("strategies", e))?;
            if !labels.insert(spec.label()) {
                return Err(config_err("strategies", format!("duplicate strategy {}", spec.label())));
            }
        }
        if self.budgets.is_empty() {
            return Err(config_err("budgets", "at least one budget is required"));
        }
        for &b in &self.budgets {
            if !(b > 0.0 && b <= 1.0) {
                return Err(config_err("budgets", format!("{b} is not a fraction in (0, 1]")));
            }
        }
        if self.budgets.windows(2).any(|w| w[0] >= w[1]) {
            return Err(config_err("budgets", "must be strictly increasing"));
        }
        if self.repeats == 0 {
            return Err(config_err("repeats", "must be at least 1"));
        }
        if self.metrics.is_empty() {
            return Err(config_err("metrics", "at least one metric is required"));
        }
        let mut seen = HashSet::new();
        if let Some(m) = self.metrics.iter().find(|m| !seen.insert(**m)) {
            return Err(config_err("metrics", format!("{m} listed twice")));
        }
        match &self.model {
            ModelSpec::Fixed { gamma, lambda } => {
                if !(gamma.is_finite() && *gamma > 0.0) {
                    return Err(config_err("model.gamma", "must be finite and positive"));
                }
                if !(lambda.is_finite() && *lambda >= 0.0) {
                    return Err(config_err("model.lambda", "must be finite and non-negative"));
                }
            }
            ModelSpec::GridSearch(g) => {
                if g.train_sizes.is_empty() || g.train_sizes.contains(&0) {
                    return Err(config_err("model.grid_search.train_sizes", "need positive sizes"));
                }
                if g.folds < 2 {
                    return Err(config_err("model.grid_search.folds", "need at least 2 folds"));
                }
                if g.repeats == 0 {
                    return Err(config_err("model.grid_search.repeats", "must be at least 1"));
                }
                for (field, grid) in [("gamma_grid", &g.gamma_grid), ("lambda_grid", &g.lambda_grid)] {
                    if let Some(v) = grid {
                        if v.is_empty() || v.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
                            return Err(config_err(
                                &format!("model.grid_search.{field}"),
                                "need non-empty finite non-negative values",
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Read a TOML config. A relative CSV path is taken relative to the config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut cfg = ExperimentConfig::from_toml(&text)?;
    if let DatasetRef::Csv { path: data, .. } = &mut cfg.dataset {
        if data.is_relative() {
            if let Some(dir) = path.parent() {
                *data = dir.join(&*data);
            }
        }
    }
    Ok(cfg)
}

/// Rows selected for a budget fraction: rounded half-up, at least 2.
pub fn budget_count(fraction: f64, n: usize) -> Result<usize> {
    let exact = fraction * n as f64;
    if !(fraction > 0.0 && fraction <= 1.0) || exact < 2.0 {
        return Err(Error::InvalidBudget { budget: exact.floor().max(0.0) as usize, pool: n });
    }
    Ok(((exact + 0.5).floor() as usize).clamp(2, n))
}
