//! Experiment configuration files.
//!
//! The encoding is flat TOML: scalar keys plus integer arrays, no tables.
//! [`ExperimentConfig::to_toml`] is the canonical serialization (fixed key
//! order, optional keys omitted when unset), and parsing it back gives an
//! equal config.

use domsets::generators::{epsilon_schedule, markov_epsilon_threshold};
use domsets::graph::MAX_VERTICES;
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("config field `{field}`: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: &str, message: impl Into<String>) -> Self {
        ConfigError {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// `G(n, 1 - epsilon)`
    Er,
    /// Two-clique construction with domination number 3.
    Gjj,
}

/// How `epsilon` is derived from `(gamma_target, n, delta)` for the `er` model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum EpsilonRule {
    /// `ln n / n^(1/(gamma-1))`
    #[default]
    Schedule,
    /// `((gamma - 1 + delta) ln n / n)^(1/(gamma-1))`
    Threshold,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sample,
}

fn default_delta() -> f64 {
    1.0
}

fn default_budget() -> u64 {
    domsets::engine::DEFAULT_WORK_BUDGET
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// `n` may be written as one integer or as an array.
fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<usize>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(usize),
        Many(Vec<usize>),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(n) => vec![n],
        OneOrMany::Many(v) => v,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: Model,
    pub gamma_target: usize,
    #[serde(deserialize_with = "one_or_many")]
    pub n: Vec<usize>,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default)]
    pub epsilon_rule: EpsilonRule,
    /// Overrides the derived edge probability for the `er` model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub trials: u64,
    pub seed: u64,
    pub k_list: Vec<usize>,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples_per_graph: Option<u64>,
    #[serde(default = "default_budget")]
    pub budget: u64,
    /// Record wall-clock time per row. Off by default: timings make output
    /// differ between otherwise identical runs.
    #[serde(default, skip_serializing_if = "is_false")]
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let field = e
                .message()
                .split('`')
                .nth(1)
                .unwrap_or("(file)")
                .to_string();
            ConfigError {
                field,
                message: e.message().trim().to_string(),
            }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("flat config always serializes")
    }

    /// Edge-absence probability for the `er` model at `n` vertices; `None` for `gjj`.
    pub fn epsilon_for(&self, n: usize) -> Result<Option<f64>, ConfigError> {
        if self.model == Model::Gjj {
            return Ok(None);
        }
        if let Some(p) = self.p {
            return Ok(Some(1.0 - p));
        }
        let eps = match self.epsilon_rule {
            EpsilonRule::Schedule => epsilon_schedule(self.gamma_target, n),
            EpsilonRule::Threshold => markov_epsilon_threshold(self.gamma_target, n, self.delta),
        };
        eps.map(Some).map_err(|e| ConfigError::new("n", e.to_string()))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n.is_empty() {
            return Err(ConfigError::new("n", "no vertex counts given"));
        }
        for &n in &self.n {
            if n == 0 || n > MAX_VERTICES {
                return Err(ConfigError::new("n", format!("{n} outside 1..={MAX_VERTICES}")));
            }
            if self.model == Model::Gjj && (n % 3 != 0 || n < 9) {
                return Err(ConfigError::new("n", format!("gjj needs a multiple of 3 that is at least 9, got {n}")));
            }
        }
        if self.trials == 0 {
            return Err(ConfigError::new("trials", "must be positive"));
        }
        if self.seed > i64::MAX as u64 {
            return Err(ConfigError::new("seed", "must fit in a signed 64-bit integer"));
        }
        if self.k_list.is_empty() {
            return Err(ConfigError::new("k_list", "empty"));
        }
        if self.k_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ConfigError::new("k_list", "must be strictly increasing"));
        }
        let n_min = *self.n.iter().min().unwrap();
        if self.k_list[0] == 0 || *self.k_list.last().unwrap() > n_min {
            return Err(ConfigError::new("k_list", format!("set sizes must lie in 1..={n_min}")));
        }
        if self.model == Model::Er {
            match self.p {
                Some(p) if !(0.0..=1.0).contains(&p) => {
                    return Err(ConfigError::new("p", format!("{p} outside [0, 1]")));
                }
                Some(_) => {}
                None => {
                    if self.gamma_target < 2 {
                        return Err(ConfigError::new("gamma_target", "must be at least 2"));
                    }
                    if self.epsilon_rule == EpsilonRule::Threshold && !(self.delta > 0.0) {
                        return Err(ConfigError::new("delta", "must be positive"));
                    }
                    for &n in &self.n {
                        self.epsilon_for(n)?;
                    }
                }
            }
        }
        if self.model == Model::Gjj && self.p.is_some() {
            return Err(ConfigError::new("p", "not used by the gjj model"));
        }
        match (self.mode, self.samples_per_graph) {
            (Mode::Sample, None | Some(0)) => {
                return Err(ConfigError::new("samples_per_graph", "sample mode needs a positive count"));
            }
            (Mode::Exact, Some(_)) => {
                return Err(ConfigError::new("samples_per_graph", "only valid in sample mode"));
            }
            _ => {}
        }
        Ok(())
    }
}
