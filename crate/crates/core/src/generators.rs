//! Random graphs with a vanishing edge-absence probability, and the two-clique
//! extremal construction with domination number three.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng;

/// Parameters of one random-graph ensemble `G(n, 1 - epsilon)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub gamma_target: usize,
    pub n: usize,
    pub delta: f64,
    pub epsilon: f64,
    pub p: f64,
    pub seed: u64,
    pub trials: u64,
}

impl EnsembleParams {
    pub fn new(gamma_target: usize, n: usize, delta: f64, epsilon: f64, seed: u64, trials: u64) -> Result<Self> {
        if gamma_target < 2 {
            return Err(Error::param("gamma_target", format!("{gamma_target} < 2")));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::param("epsilon", format!("{epsilon} outside (0, 1)")));
        }
        if !(delta >= 0.0) {
            return Err(Error::param("delta", format!("{delta} is negative")));
        }
        if trials == 0 {
            return Err(Error::NoTrials);
        }
        Ok(EnsembleParams {
            gamma_target,
            n,
            delta,
            epsilon,
            p: 1.0 - epsilon,
            seed,
            trials,
        })
    }

    /// Uses `epsilon = ln n / n^(1/(gamma-1))`.
    pub fn scheduled(gamma_target: usize, n: usize, delta: f64, seed: u64, trials: u64) -> Result<Self> {
        EnsembleParams::new(gamma_target, n, delta, epsilon_schedule(gamma_target, n)?, seed, trials)
    }

    /// Uses the smallest epsilon the first-moment bound allows for this delta.
    pub fn at_threshold(gamma_target: usize, n: usize, delta: f64, seed: u64, trials: u64) -> Result<Self> {
        let eps = markov_epsilon_threshold(gamma_target, n, delta)?;
        EnsembleParams::new(gamma_target, n, delta, eps, seed, trials)
    }

    /// The graph for trial `t`, seeded with [`rng::derive_seed`]`(seed, t)`.
    pub fn sample(&self, t: u64) -> Result<Graph> {
        erdos_renyi(self.n, self.p, rng::derive_seed(self.seed, t))
    }
}

fn schedule_value(gamma: usize, n: usize) -> f64 {
    (n as f64).ln() / (n as f64).powf(1.0 / (gamma as f64 - 1.0))
}

/// `ln n / n^(1/(gamma-1))`, which must lie in `(0, 1)`.
pub fn epsilon_schedule(gamma: usize, n: usize) -> Result<f64> {
    if gamma < 2 {
        return Err(Error::param("gamma", "the schedule needs gamma >= 2 (exponent 1/(gamma-1))"));
    }
    if n < 2 {
        return Err(Error::param("n", format!("{n} < 2")));
    }
    let eps = schedule_value(gamma, n);
    if eps >= 1.0 {
        // ln n grows slower than any root, so a valid n exists above this one
        let next = (n..).find(|&m| schedule_value(gamma, m) < 1.0).unwrap();
        return Err(Error::param(
            "n",
            format!("schedule gives {eps:.6} >= 1 at n = {n}; gamma = {gamma} needs n >= {next}"),
        ));
    }
    Ok(eps)
}

/// `((gamma - 1 + delta) ln n / n)^(1/(gamma-1))`: the smallest epsilon for
/// which the expected number of dominating `(gamma-1)`-sets vanishes.
pub fn markov_epsilon_threshold(gamma: usize, n: usize, delta: f64) -> Result<f64> {
    if gamma < 2 {
        return Err(Error::param("gamma", format!("{gamma} < 2")));
    }
    if n < 2 {
        return Err(Error::param("n", format!("{n} < 2")));
    }
    if !(delta > 0.0) {
        return Err(Error::param("delta", format!("{delta} must be positive")));
    }
    let base = (gamma as f64 - 1.0 + delta) * (n as f64).ln() / n as f64;
    let eps = base.powf(1.0 / (gamma as f64 - 1.0));
    if eps >= 1.0 {
        return Err(Error::param("epsilon", format!("threshold {eps} >= 1")));
    }
    Ok(eps)
}

/// `G(n, p)`. Pairs `(u, v)`, `u < v`, are visited in lexicographic order and
/// each consumes one SplitMix64 output `x`; the edge is present iff
/// `(x >> 11) * 2^-53 < p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", format!("{p} outside [0, 1]")));
    }
    let mut g = Graph::empty(n)?;
    let mut stream = rng::stream(seed);
    for u in 0..n {
        for v in u + 1..n {
            if rng::next_unit(&mut stream) < p {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

/// Disjoint union of `K_{n/3}` on `0..n/3` and, on the remaining `2n/3`
/// vertices, a complete graph minus the perfect matching that pairs
/// `n/3 + 2i` with `n/3 + 2i + 1`.
pub fn gjj_gamma3(n: usize) -> Result<Graph> {
    if n % 3 != 0 || n < 9 {
        return Err(Error::param("n", format!("{n} must be a multiple of 3 and at least 9")));
    }
    let third = n / 3;
    let mut g = Graph::empty(n)?;
    for u in 0..third {
        for v in u + 1..third {
            g.add_edge(u, v)?;
        }
    }
    for u in third..n {
        for v in u + 1..n {
            let matched = (u - third) % 2 == 0 && v == u + 1;
            if !matched {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}
