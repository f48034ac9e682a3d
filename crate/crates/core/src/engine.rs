//! Domination number, exact and sampled counting of dominating k-sets, and the
//! row-zero lower bound on non-dominating sets.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::binom::{binomial, binomial_u128};
use crate::bitset::{intersection_count, popcount, union_into, WORD_BITS};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng;

/// Default ceiling on `C(n,k) * k` for exact counting.
pub const DEFAULT_WORK_BUDGET: u64 = 1_000_000_000;

/// Two-sided 99% standard normal quantile.
const Z_99: f64 = 2.575_829_303_548_901;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominationCount {
    pub k: usize,
    #[serde(serialize_with = "crate::serde_decimal::serialize")]
    pub total: BigUint,
    #[serde(serialize_with = "crate::serde_decimal::serialize")]
    pub dominating: BigUint,
    #[serde(serialize_with = "crate::serde_decimal::serialize")]
    pub non_dominating: BigUint,
    pub fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FractionEstimate {
    pub point: f64,
    /// Half-width of the 99% normal-approximation interval.
    pub half_width: f64,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct CountOptions {
    pub budget: u64,
    /// Split the enumeration across the rayon pool by first vertex.
    pub parallel: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            budget: DEFAULT_WORK_BUDGET,
            parallel: true,
        }
    }
}

// ---------------------------------------------------------------------------
// domination number

/// Greedy cover: repeatedly take the vertex covering the most uncovered
/// vertices, lowest index on ties.
pub fn greedy_dominating_set(g: &Graph) -> Vec<usize> {
    let mut uncovered = g.full_words();
    let mut chosen = Vec::new();
    while popcount(&uncovered) > 0 {
        let best = (0..g.n())
            .max_by_key(|&v| (intersection_count(g.row(v), &uncovered), std::cmp::Reverse(v)))
            .unwrap();
        chosen.push(best);
        for (u, r) in uncovered.iter_mut().zip(g.row(best)) {
            *u &= !r;
        }
    }
    chosen
}

struct Solver<'a> {
    g: &'a Graph,
    gains: Vec<usize>,
}

impl Solver<'_> {
    /// Is there a dominating set using at most `budget` more vertices outside
    /// `excluded`? On success `chosen` holds the picks.
    fn decide(&mut self, uncovered: &[u64], excluded: &mut [u64], budget: usize, chosen: &mut Vec<usize>) -> bool {
        let g = self.g;
        let n = g.n();
        let need = popcount(uncovered);
        if need == 0 {
            return true;
        }
        if budget == 0 {
            return false;
        }
        if budget == 1 {
            // the one remaining vertex must lie in N[u] for every uncovered u
            let mut cand: Vec<u64> = excluded.iter().map(|w| !w).collect();
            for u in iter_bits(uncovered) {
                for (c, r) in cand.iter_mut().zip(g.row(u)) {
                    *c &= r;
                }
            }
            return match iter_bits(&cand).find(|&w| w < n) {
                Some(w) => {
                    chosen.push(w);
                    true
                }
                None => false,
            };
        }

        let mut max_gain = 0;
        self.gains.clear();
        for v in 0..n {
            if !test_bit(excluded, v) {
                let gain = intersection_count(g.row(v), uncovered);
                max_gain = max_gain.max(gain);
                self.gains.push(gain);
            }
        }
        if budget * max_gain < need {
            return false;
        }
        // the best `budget` gains together still fall short
        if self.gains.len() > budget {
            self.gains.select_nth_unstable_by(budget - 1, |a, b| b.cmp(a));
        }
        if self.gains.iter().take(budget).sum::<usize>() < need {
            return false;
        }

        // branch on the uncovered vertex with the fewest available dominators
        let mut branch = None;
        let mut fewest = usize::MAX;
        for u in iter_bits(uncovered) {
            let avail: usize = g.row(u).iter().zip(excluded.iter()).map(|(r, x)| (r & !x).count_ones() as usize).sum();
            if avail < fewest {
                fewest = avail;
                branch = Some(u);
            }
        }
        let branch = branch.unwrap();
        if fewest == 0 {
            return false;
        }
        let options: Vec<u64> = g.row(branch).iter().zip(excluded.iter()).map(|(r, x)| r & !x).collect();
        let mut next = vec![0u64; uncovered.len()];
        let mut tried = Vec::new();
        let mut found = false;
        for w in iter_bits(&options) {
            for ((d, u), r) in next.iter_mut().zip(uncovered).zip(g.row(w)) {
                *d = u & !r;
            }
            chosen.push(w);
            if self.decide(&next, excluded, budget - 1, chosen) {
                found = true;
                break;
            }
            chosen.pop();
            // later branches may assume w is not in the set
            set_bit(excluded, w);
            tried.push(w);
        }
        for w in tried {
            clear_bit(excluded, w);
        }
        found
    }
}

/// A dominating set of size at most `k`, if one exists.
pub fn dominating_set_within(g: &Graph, k: usize) -> Option<Vec<usize>> {
    let mut solver = Solver {
        g,
        gains: Vec::with_capacity(g.n()),
    };
    let mut excluded = vec![0u64; g.stride()];
    let mut chosen = Vec::new();
    solver
        .decide(&g.full_words(), &mut excluded, k, &mut chosen)
        .then_some(chosen)
}

/// Exact domination number: greedy upper bound, then decision searches at
/// decreasing sizes until one fails.
pub fn domination_number(g: &Graph) -> usize {
    minimum_dominating_set(g).len()
}

/// A dominating set of minimum size.
pub fn minimum_dominating_set(g: &Graph) -> Vec<usize> {
    let mut best = greedy_dominating_set(g);
    while best.len() > 1 {
        match dominating_set_within(g, best.len() - 1) {
            Some(smaller) => best = smaller,
            None => break,
        }
    }
    best
}

// ---------------------------------------------------------------------------
// exact counting

pub fn count_dominating_exact(g: &Graph, k: usize) -> Result<DominationCount> {
    count_dominating_exact_with(g, k, CountOptions::default())
}

/// Counts dominating `k`-subsets by enumerating combinations in lexicographic
/// order. A running union of closed neighborhoods is kept along the prefix, and
/// a prefix is abandoned when the largest closed neighborhoods still available
/// cannot cover what remains.
pub fn count_dominating_exact_with(g: &Graph, k: usize, opts: CountOptions) -> Result<DominationCount> {
    let n = g.n();
    if k > n {
        return Err(Error::SetSize { k, n });
    }
    let total = binomial(n as u64, k as u64);
    let work = &total * BigUint::from(k.max(1));
    if work > BigUint::from(opts.budget) {
        return Err(Error::BudgetExceeded {
            n,
            k,
            subsets: total.to_string(),
            work: work.to_string(),
            budget: opts.budget,
        });
    }

    let dominating = if k == 0 {
        BigUint::zero()
    } else {
        let counter = Counter::new(g, k);
        let firsts = 0..=n - k;
        let sum: u128 = if opts.parallel {
            firsts.into_par_iter().map(|v| counter.count_from(v)).sum()
        } else {
            firsts.map(|v| counter.count_from(v)).sum()
        };
        BigUint::from(sum)
    };
    let fraction = ratio(&dominating, &total);
    Ok(DominationCount {
        k,
        non_dominating: &total - &dominating,
        total,
        dominating,
        fraction,
    })
}

fn ratio(num: &BigUint, den: &BigUint) -> f64 {
    match (num.to_f64(), den.to_f64()) {
        (Some(a), Some(b)) if b.is_finite() && b > 0.0 => a / b,
        _ => {
            // scale both down to keep f64 range
            let shift = den.bits().saturating_sub(1000);
            (num >> shift).to_f64().unwrap_or(0.0) / (den >> shift).to_f64().unwrap_or(1.0)
        }
    }
}

struct Counter<'a> {
    g: &'a Graph,
    k: usize,
    full: Vec<u64>,
    /// `reach[r][i]`: sum of the `r` largest closed-neighborhood sizes among vertices `i..n`.
    reach: Vec<Vec<usize>>,
}

impl<'a> Counter<'a> {
    fn new(g: &'a Graph, k: usize) -> Self {
        let n = g.n();
        let sizes: Vec<usize> = (0..n).map(|v| popcount(g.row(v))).collect();
        let mut reach = vec![vec![0usize; n + 1]; k + 1];
        let mut top: Vec<usize> = Vec::with_capacity(k + 1);
        for i in (0..n).rev() {
            let pos = top.partition_point(|&s| s >= sizes[i]);
            top.insert(pos, sizes[i]);
            top.truncate(k);
            let mut acc = 0;
            for (r, row) in reach.iter_mut().enumerate().skip(1) {
                if let Some(&s) = top.get(r - 1) {
                    acc += s;
                }
                row[i] = acc;
            }
        }
        Counter {
            g,
            k,
            full: g.full_words(),
            reach,
        }
    }

    /// Dominating k-sets whose smallest vertex is `first`.
    fn count_from(&self, first: usize) -> u128 {
        let stride = self.g.stride();
        let mut unions = vec![0u64; self.k * stride];
        unions[..stride].copy_from_slice(self.g.row(first));
        let mut scratch = Vec::with_capacity(stride);
        self.extend(&mut unions, 1, first + 1, &mut scratch)
    }

    /// `unions[(depth-1)*stride..]` holds the union for `depth` picks so far.
    fn extend(&self, unions: &mut [u64], depth: usize, start: usize, scratch: &mut Vec<u64>) -> u128 {
        let g = self.g;
        let n = g.n();
        let stride = g.stride();
        let remaining = self.k - depth;
        let cur = &unions[(depth - 1) * stride..depth * stride];
        if remaining == 0 {
            return g.covers_all(cur) as u128;
        }
        if start + remaining > n {
            return 0;
        }
        let missing: usize = cur.iter().zip(&self.full).map(|(c, f)| (f & !c).count_ones() as usize).sum();
        if missing == 0 {
            return binomial_u128((n - start) as u64, remaining as u64).unwrap();
        }
        if self.reach[remaining][start] < missing {
            return 0;
        }

        if remaining == 1 {
            // c covers the residue iff c lies in N[u] for every uncovered u
            let cand = scratch;
            cand.clear();
            cand.extend((0..stride).map(|i| {
                let lo = i * WORD_BITS;
                if lo + WORD_BITS <= start {
                    0
                } else if lo >= start {
                    u64::MAX
                } else {
                    u64::MAX << (start - lo)
                }
            }));
            for (i, (&c, &f)) in cur.iter().zip(&self.full).enumerate() {
                let mut w = f & !c;
                while w != 0 {
                    let u = i * WORD_BITS + w.trailing_zeros() as usize;
                    w &= w - 1;
                    let mut any = 0;
                    for (x, r) in cand.iter_mut().zip(g.row(u)) {
                        *x &= r;
                        any |= *x;
                    }
                    if any == 0 {
                        return 0;
                    }
                }
            }
            return popcount(cand) as u128;
        }

        let mut total = 0;
        for c in start..=n - remaining {
            let (done, rest) = unions.split_at_mut(depth * stride);
            let next = &mut rest[..stride];
            next.copy_from_slice(&done[(depth - 1) * stride..]);
            union_into(next, g.row(c));
            total += self.extend(unions, depth + 1, c + 1, scratch);
        }
        total
    }
}

// ---------------------------------------------------------------------------
// sampling and certificates

/// Monte Carlo estimate of the dominating fraction among `k`-subsets.
///
/// Trial `t` draws one uniform `k`-subset with a SplitMix64 stream seeded by
/// [`rng::derive_seed`]`(seed, t)`, so results do not depend on scheduling.
pub fn estimate_dominating_fraction(g: &Graph, k: usize, trials: u64, seed: u64) -> Result<FractionEstimate> {
    let n = g.n();
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    if k == 0 || k > n {
        return Err(Error::SetSize { k, n });
    }
    let hits = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let mut stream = rng::stream(rng::derive_seed(seed, t));
            let picks = rand::seq::index::sample(&mut stream, n, k).into_vec();
            g.dominates(&picks)
        })
        .count();
    let point = hits as f64 / trials as f64;
    let half_width = Z_99 * (point * (1.0 - point) / trials as f64).sqrt();
    Ok(FractionEstimate {
        point,
        half_width,
        trials,
        seed,
    })
}

/// `C(z_max, m)`: every `m`-subset of the zero columns of the row with the
/// most zeros leaves that row's vertex undominated.
pub fn row_zero_lower_bound(g: &Graph, m: usize) -> BigUint {
    binomial(g.row_zero_profile().z_max as u64, m as u64)
}

// ---------------------------------------------------------------------------

#[inline]
fn test_bit(words: &[u64], v: usize) -> bool {
    words[v / WORD_BITS] >> (v % WORD_BITS) & 1 == 1
}

#[inline]
fn set_bit(words: &mut [u64], v: usize) {
    words[v / WORD_BITS] |= 1 << (v % WORD_BITS);
}

#[inline]
fn clear_bit(words: &mut [u64], v: usize) {
    words[v / WORD_BITS] &= !(1 << (v % WORD_BITS));
}

fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            (w != 0).then(|| {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                i * WORD_BITS + b
            })
        })
    })
}
