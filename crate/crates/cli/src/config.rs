//! Experiment configuration: a JSON file whose values are overridden by
//! command-line flags.

use std::path::{Path, PathBuf};

use mmqss::deterministic::State2;
use mmqss::{Parameters, Thresholds};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// Every key is optional; unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub params: Option<Parameters>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub quick: bool,
    pub thresholds: Option<Thresholds>,
    /// Event budget per network and sweep point.
    pub budget: Option<u64>,
    pub betas: Option<Vec<f64>>,
    pub workers: Option<usize>,
    pub replicas: Option<usize>,
    pub burn_in_relaxations: Option<f64>,
    pub network: Option<String>,
    pub t_end: Option<f64>,
    pub sample_interval: Option<f64>,
    pub initial_counts: Option<[u64; 2]>,
    pub kind: Option<String>,
    pub step: Option<f64>,
    pub initial: Option<State2>,
    #[serde(default)]
    pub product: bool,
    pub tfpv: Option<String>,
    pub points: Option<Vec<f64>>,
    pub delta: Option<f64>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let config: Self = serde_json::from_str(text)
            .map_err(|e| CliError::Usage(format!("malformed config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> CliResult<()> {
        if let Some(betas) = &self.betas {
            if betas.is_empty() {
                return Err(CliError::Usage("sweep grid `betas` is empty".into()));
            }
            if let Some(b) = betas.iter().find(|b| !(b.is_finite() && **b > 0.0)) {
                return Err(CliError::Usage(format!("beta must be positive, got {b}")));
            }
        }
        if self.budget == Some(0) {
            return Err(CliError::Usage("budget must be positive".into()));
        }
        if self.workers == Some(0) {
            return Err(CliError::Usage("workers must be positive".into()));
        }
        if matches!(self.replicas, Some(r) if r < 2) {
            return Err(CliError::Usage("replicas must be at least 2".into()));
        }
        if let Some(points) = &self.points {
            if points.is_empty() {
                return Err(CliError::Usage("`points` is empty".into()));
            }
        }
        Ok(())
    }
}

/// Per-field parameter overrides from flags.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ParamOverrides {
    pub k0: Option<f64>,
    pub e_t: Option<f64>,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub k_m1: Option<f64>,
    pub omega: Option<f64>,
}

impl ParamOverrides {
    fn is_empty(&self) -> bool {
        *self == Self::default()
    }

    /// Applies the overrides on top of `base`. Without a base all rate
    /// constants are required and `omega` defaults to 1.
    pub fn resolve(&self, base: Option<Parameters>) -> CliResult<Parameters> {
        let missing = |name: &str| {
            CliError::Usage(format!(
                "no value for {name}: give `params` in --config or pass --{name}"
            ))
        };
        let params = match base {
            Some(b) => Parameters::new(
                self.k0.unwrap_or(b.k0),
                self.e_t.unwrap_or(b.e_t),
                self.k1.unwrap_or(b.k1),
                self.k2.unwrap_or(b.k2),
                self.k_m1.unwrap_or(b.k_m1),
                self.omega.unwrap_or(b.omega),
            ),
            None => Parameters::new(
                self.k0.ok_or_else(|| missing("k0"))?,
                self.e_t.ok_or_else(|| missing("et"))?,
                self.k1.ok_or_else(|| missing("k1"))?,
                self.k2.ok_or_else(|| missing("k2"))?,
                self.k_m1.ok_or_else(|| missing("km1"))?,
                self.omega.unwrap_or(1.0),
            ),
        };
        Ok(params?)
    }

    pub fn resolve_with(&self, config: &ExperimentConfig) -> CliResult<Parameters> {
        if config.params.is_none() && self.is_empty() {
            return Err(CliError::Usage(
                "no parameters: give `params` in --config or pass --k0 --et --k1 --k2 --km1".into(),
            ));
        }
        self.resolve(config.params)
    }
}
