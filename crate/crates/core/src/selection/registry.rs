use serde::{Deserialize, Serialize};

use super::{facility, fps, hybrid, kmedoids, random};
use super::{FacilityLocation, Fps, FpsThenRandom, KMedoidsPlusPlus, RandomSampler, Sampler};
use crate::{Error, Result};

/// A named strategy plus the options it takes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategySpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub switch_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
}

impl StrategySpec {
    pub fn named(kind: impl Into<String>) -> Self {
        StrategySpec { kind: kind.into(), switch_fraction: None, start_index: None, max_iters: None }
    }

    pub fn fps_then_random(switch_fraction: f64) -> Self {
        StrategySpec { switch_fraction: Some(switch_fraction), ..Self::named(hybrid::NAME) }
    }

    /// Tag used in reports: the kind, with the switch fraction for hybrids.
    pub fn label(&self) -> String {
        match self.switch_fraction {
            Some(f) => format!("{}@{}", self.kind, f),
            None => self.kind.clone(),
        }
    }
}

type Factory = fn(&StrategySpec) -> Result<Box<dyn Sampler>>;

struct Entry {
    name: &'static str,
    summary: &'static str,
    factory: Factory,
}

/// Sampler constructors keyed by strategy name.
pub struct SamplerRegistry {
    entries: Vec<Entry>,
}

fn reject_switch(spec: &StrategySpec) -> Result<()> {
    if spec.switch_fraction.is_some() {
        return Err(Error::InvalidArgument(format!("switch_fraction only applies to {}", hybrid::NAME)));
    }
    Ok(())
}

fn reject_start(spec: &StrategySpec) -> Result<()> {
    if spec.start_index.is_some() {
        return Err(Error::InvalidArgument(format!("{} takes no start_index", spec.kind)));
    }
    Ok(())
}

fn reject_iters(spec: &StrategySpec) -> Result<()> {
    if spec.max_iters.is_some() {
        return Err(Error::InvalidArgument(format!("{} takes no max_iters", spec.kind)));
    }
    Ok(())
}

impl SamplerRegistry {
    pub fn empty() -> Self {
        SamplerRegistry { entries: Vec::new() }
    }

    /// All samplers shipped with the crate.
    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(fps::NAME, "farthest point sampling", |s| {
            reject_switch(s)?;
            reject_iters(s)?;
            Ok(Box::new(Fps { start_index: s.start_index }))
        });
        r.register(random::NAME, "uniform without replacement", |s| {
            reject_switch(s)?;
            reject_start(s)?;
            reject_iters(s)?;
            Ok(Box::new(RandomSampler))
        });
        r.register(facility::NAME, "greedy facility location", |s| {
            reject_switch(s)?;
            reject_iters(s)?;
            Ok(Box::new(FacilityLocation { start_index: s.start_index }))
        });
        r.register(kmedoids::NAME, "k-medoids with ++ seeding", |s| {
            reject_switch(s)?;
            reject_start(s)?;
            Ok(Box::new(KMedoidsPlusPlus { max_iters: s.max_iters.unwrap_or(kmedoids::DEFAULT_MAX_ITERS) }))
        });
        r.register(hybrid::NAME, "farthest point sampling, then uniform", |s| {
            reject_start(s)?;
            reject_iters(s)?;
            let f = s
                .switch_fraction
                .ok_or_else(|| Error::InvalidArgument(format!("{} requires switch_fraction", hybrid::NAME)))?;
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::InvalidArgument(format!("switch_fraction must lie in (0, 1), got {f}")));
            }
            Ok(Box::new(FpsThenRandom { switch_fraction: f }))
        });
        r
    }

    /// Add a sampler; a later registration under the same name replaces the earlier one.
    pub fn register(&mut self, name: &'static str, summary: &'static str, factory: Factory) {
        self.entries.retain(|e| e.name != name);
        self.entries.push(Entry { name, summary, factory });
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name).collect()
    }

    pub fn describe(&self) -> Vec<(&'static str, &'static str)> {
        self.entries.iter().map(|e| (e.name, e.summary)).collect()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.iter().any(|e| e.name == name)
    }

    pub fn build(&self, spec: &StrategySpec) -> Result<Box<dyn Sampler>> {
        let entry = self.entries.iter().find(|e| e.name == spec.kind).ok_or_else(|| Error::UnknownStrategy {
            name: spec.kind.clone(),
            valid: self.names().iter().map(|s| s.to_string()).collect(),
        })?;
        (entry.factory)(spec)
    }
}

impl Default for SamplerRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}
