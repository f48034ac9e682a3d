//! Brute-force ground truth.
//!
//! Nothing here uses the bitmask union machinery of [`Graph`]: graphs are
//! turned into plain adjacency matrices and domination is checked vertex by
//! vertex from the definition (every vertex outside `S` has a neighbor in `S`).

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MAX_ENSEMBLE_VERTICES: usize = 6;
pub const MAX_NAIVE_SOLVER_VERTICES: usize = 16;
pub const NAIVE_COUNT_LIMIT: u64 = 1_000_000;

/// Exact moments of `X_gamma` over the full weighted ensemble `G(n, 1 - epsilon)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleResult {
    pub n: usize,
    pub gamma: usize,
    pub epsilon: f64,
    pub expectation: f64,
    pub second_moment: f64,
    pub graphs_enumerated: u64,
    pub weight_sum: f64,
}

type Adjacency = Vec<Vec<bool>>;

fn adjacency_of(g: &Graph) -> Adjacency {
    let mut adj = vec![vec![false; g.n()]; g.n()];
    for (u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    adj
}

fn dominates_by_definition(adj: &Adjacency, members: &[bool]) -> bool {
    (0..adj.len()).all(|v| members[v] || (0..adj.len()).any(|u| members[u] && adj[u][v]))
}

/// Calls `f` with each k-subset of `0..n`, as a membership vector.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[bool])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut members = vec![false; n];
    loop {
        members.fill(false);
        for &i in &idx {
            members[i] = true;
        }
        f(&members);
        // advance to the next combination in lexicographic order
        let Some(pos) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return;
        };
        idx[pos] += 1;
        for i in pos + 1..k {
            idx[i] = idx[i - 1] + 1;
        }
    }
}

fn count_by_definition(adj: &Adjacency, k: usize) -> u64 {
    let mut count = 0;
    for_each_subset(adj.len(), k, |m| {
        if dominates_by_definition(adj, m) {
            count += 1;
        }
    });
    count
}

/// Enumerates all `2^C(n,2)` labeled graphs on `n` vertices, each weighted by
/// `epsilon^missing * (1 - epsilon)^present`, and returns `E[X]` and `E[X^2]`
/// where `X` counts dominating `gamma`-sets.
pub fn brute_expectation(n: usize, gamma: usize, epsilon: f64) -> Result<OracleResult> {
    if n == 0 || n > MAX_ENSEMBLE_VERTICES {
        return Err(Error::param("n", format!("{n} outside 1..={MAX_ENSEMBLE_VERTICES}")));
    }
    if gamma > n {
        return Err(Error::SetSize { k: gamma, n });
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::param("epsilon", format!("{epsilon} outside [0, 1]")));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let m = pairs.len();
    let graphs = 1u64 << m;
    let (mut ex, mut ex2, mut wsum) = (0.0, 0.0, 0.0);
    let mut adj = vec![vec![false; n]; n];
    for mask in 0..graphs {
        let present = mask.count_ones() as i32;
        let weight = epsilon.powi(m as i32 - present) * (1.0 - epsilon).powi(present);
        wsum += weight;
        if weight == 0.0 {
            continue;
        }
        for (bit, &(u, v)) in pairs.iter().enumerate() {
            let e = mask >> bit & 1 == 1;
            adj[u][v] = e;
            adj[v][u] = e;
        }
        let x = count_by_definition(&adj, gamma) as f64;
        ex += weight * x;
        ex2 += weight * x * x;
    }
    Ok(OracleResult {
        n,
        gamma,
        epsilon,
        expectation: ex,
        second_moment: ex2,
        graphs_enumerated: graphs,
        weight_sum: wsum,
    })
}

/// Smallest `k` for which some `k`-subset dominates, by exhaustive search.
pub fn naive_domination_number(g: &Graph) -> Result<usize> {
    if g.n() > MAX_NAIVE_SOLVER_VERTICES {
        return Err(Error::param(
            "n",
            format!("{} exceeds naive solver limit {MAX_NAIVE_SOLVER_VERTICES}", g.n()),
        ));
    }
    let adj = adjacency_of(g);
    let n = g.n();
    Ok((1..=n)
        .find(|&k| {
            let mut found = false;
            for_each_subset(n, k, |m| found |= !found && dominates_by_definition(&adj, m));
            found
        })
        .unwrap_or(n))
}

/// Number of dominating `k`-subsets, checked one subset at a time.
pub fn naive_count(g: &Graph, k: usize) -> Result<BigUint> {
    let n = g.n();
    if k > n {
        return Err(Error::SetSize { k, n });
    }
    let subsets = crate::binom::binomial(n as u64, k as u64);
    if subsets > BigUint::from(NAIVE_COUNT_LIMIT) {
        return Err(Error::param(
            "k",
            format!("C({n},{k}) = {subsets} exceeds naive limit {NAIVE_COUNT_LIMIT}"),
        ));
    }
    Ok(BigUint::from(count_by_definition(&adjacency_of(g), k)))
}
