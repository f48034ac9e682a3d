//! Runs an [`ExperimentConfig`] and writes one CSV row per `(n, trial, k)`.

use std::collections::HashMap;
use std::io::Write;
use std::time::Instant;

use domsets::engine::{count_dominating_exact_with, domination_number, estimate_dominating_fraction, CountOptions};
use domsets::generators::{erdos_renyi, gjj_gamma3};
use domsets::moments::{expected_count, variance_exact};
use domsets::{rng, Error, Graph};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ConfigError, ExperimentConfig, Mode, Model};

pub const STATUS_OK: &str = "ok";
pub const STATUS_BUDGET: &str = "budget_exceeded";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub trial: u64,
    pub seed: u64,
    pub n: usize,
    pub gamma_target: usize,
    pub epsilon: Option<f64>,
    pub p: Option<f64>,
    pub gamma_measured: usize,
    pub k: usize,
    pub status: &'static str,
    /// Exact count as a decimal string; empty in sample mode or on error.
    pub dominating_count: Option<String>,
    pub fraction: Option<f64>,
    /// 99% half-width of a sampled fraction.
    pub half_width: Option<f64>,
    pub formula_expected: Option<f64>,
    pub formula_sd: Option<f64>,
    pub elapsed_ms: Option<u64>,
}

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] Error),
}

fn build_graph(cfg: &ExperimentConfig, n: usize, p: Option<f64>, seed: u64) -> Result<Graph, Error> {
    match cfg.model {
        Model::Er => erdos_renyi(n, p.expect("er rows carry p"), seed),
        Model::Gjj => gjj_gamma3(n),
    }
}

/// `E(X_k)` and `sqrt(Var(X_k))` keyed by `(n, k)`.
type FormulaTable = HashMap<(usize, usize), (Option<f64>, Option<f64>)>;

/// `E(X_k)` and `sqrt(Var(X_k))` under `G(n, 1 - epsilon)`.
fn formulas(n: usize, k: usize, epsilon: f64) -> (Option<f64>, Option<f64>) {
    let e = expected_count(n, k, epsilon).ok();
    let sd = e.and_then(|_| variance_exact(n, k, epsilon).ok()).map(|v| v.value.sqrt());
    (e, sd)
}

fn run_trial(
    cfg: &ExperimentConfig,
    n: usize,
    epsilon: Option<f64>,
    trial: u64,
    formula: &FormulaTable,
) -> Result<Vec<ExperimentRow>, Error> {
    let seed = rng::derive_seed(cfg.seed, trial);
    let p = epsilon.map(|e| cfg.p.unwrap_or(1.0 - e));
    let g = build_graph(cfg, n, p, seed)?;
    let gamma_measured = domination_number(&g);
    let opts = CountOptions {
        budget: cfg.budget,
        parallel: true,
    };
    let mut rows = Vec::with_capacity(cfg.k_list.len());
    for &k in &cfg.k_list {
        let (formula_expected, formula_sd) = formula.get(&(n, k)).copied().unwrap_or((None, None));
        let mut row = ExperimentRow {
            trial,
            seed,
            n,
            gamma_target: cfg.gamma_target,
            epsilon,
            p,
            gamma_measured,
            k,
            status: STATUS_OK,
            dominating_count: None,
            fraction: None,
            half_width: None,
            formula_expected,
            formula_sd,
            elapsed_ms: None,
        };
        let start = Instant::now();
        match cfg.mode {
            Mode::Exact => match count_dominating_exact_with(&g, k, opts) {
                Ok(c) => {
                    row.dominating_count = Some(c.dominating.to_string());
                    row.fraction = Some(c.fraction);
                }
                Err(Error::BudgetExceeded { .. }) => row.status = STATUS_BUDGET,
                Err(e) => return Err(e),
            },
            Mode::Sample => {
                let samples = cfg.samples_per_graph.expect("validated");
                // the sampling stream is separate from the graph stream
                let est = estimate_dominating_fraction(&g, k, samples, rng::derive_seed(seed, k as u64))?;
                row.fraction = Some(est.point);
                row.half_width = Some(est.half_width);
            }
        }
        if cfg.timing {
            row.elapsed_ms = Some(start.elapsed().as_millis() as u64);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Rows ordered by `n` (as listed), then trial, then `k`. Trials run on the
/// rayon pool; the output does not depend on the thread count.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>, ExperimentError> {
    cfg.validate()?;
    let mut eps_by_n = Vec::with_capacity(cfg.n.len());
    let mut formula = FormulaTable::new();
    for &n in &cfg.n {
        let eps = cfg.epsilon_for(n)?;
        if let Some(e) = eps {
            for &k in &cfg.k_list {
                formula.insert((n, k), formulas(n, k, e));
            }
        }
        eps_by_n.push(eps);
    }
    let tasks: Vec<(usize, u64)> = (0..cfg.n.len())
        .flat_map(|i| (0..cfg.trials).map(move |t| (i, t)))
        .collect();
    let chunks = tasks
        .par_iter()
        .map(|&(i, t)| run_trial(cfg, cfg.n[i], eps_by_n[i], t, &formula))
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

pub fn all_rows_over_budget(rows: &[ExperimentRow]) -> bool {
    !rows.is_empty() && rows.iter().all(|r| r.status == STATUS_BUDGET)
}

pub fn write_csv<W: Write>(rows: &[ExperimentRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(rows: &[ExperimentRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}
