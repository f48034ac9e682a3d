//! Exact and probabilistic counting of dominating vertex sets.
//!
//! Graphs are stored as their s-adjacency matrix (adjacency plus identity),
//! one closed-neighborhood bitmask per vertex. On top of that sit an exact
//! domination-number solver, budgeted exact and sampled counters for
//! dominating `k`-sets, seeded random-graph generators, closed-form moments of
//! the dominating-set count in `G(n, 1 - epsilon)`, and a brute-force oracle
//! for cross-checking all of it on small inputs.

pub mod binom;
pub mod bitset;
pub mod engine;
pub mod error;
pub mod generators;
pub mod graph;
pub mod moments;
pub mod oracle;
pub mod rng;
pub mod serde_decimal;

pub use bitset::VertexSet;
pub use engine::{
    count_dominating_exact, count_dominating_exact_with, domination_number, estimate_dominating_fraction,
    row_zero_lower_bound, CountOptions, DominationCount, FractionEstimate,
};
pub use error::{Error, Result};
pub use generators::{epsilon_schedule, erdos_renyi, gjj_gamma3, markov_epsilon_threshold, EnsembleParams};
pub use graph::{Graph, RowZeroProfile};
