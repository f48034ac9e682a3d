//! Closed-form moments of the number of dominating `gamma`-sets in
//! `G(n, 1 - epsilon)`, and the counting bounds that bracket the maximum
//! number of minimum dominating sets.
//!
//! Everything is evaluated in log space (`ln C(n,k)`, `ln_1p` for powers of
//! `1 - epsilon^gamma`) so that values like `e^-10000` do not underflow
//! before they are combined.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Pow;
use serde::Serialize;

use crate::binom::{binomial, binomial_u128, factorial_f64, ln_binomial};
use crate::error::{Error, Result};

/// Relative size of a negative variance that is attributed to rounding.
pub const VARIANCE_CLAMP_TOLERANCE: f64 = 1e-9;

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::param("epsilon", format!("{epsilon} outside (0, 1)")))
    }
}

fn check_gamma(n: usize, gamma: usize) -> Result<()> {
    if gamma == 0 || gamma > n {
        return Err(Error::SetSize { k: gamma, n });
    }
    Ok(())
}

/// `ln (1 - epsilon^gamma)`.
fn ln_dominated(epsilon: f64, gamma: usize) -> f64 {
    (-epsilon.powi(gamma as i32)).ln_1p()
}

/// Probability that one fixed `gamma`-set dominates: `(1 - eps^gamma)^(n - gamma)`.
fn ln_single(n: usize, gamma: usize, epsilon: f64) -> f64 {
    (n - gamma) as f64 * ln_dominated(epsilon, gamma)
}

/// `E(X_gamma) = C(n,gamma) (1 - eps^gamma)^(n - gamma)`.
pub fn expected_count(n: usize, gamma: usize, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    check_gamma(n, gamma)?;
    Ok((ln_binomial(n as u64, gamma as u64) + ln_single(n, gamma, epsilon)).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MarkovTail {
    /// `min(1, uncapped)`: bound on `P(X_{gamma-1} >= 1)`.
    pub bound: f64,
    /// `C(n, gamma-1) (1 - eps^(gamma-1))^(n - gamma + 1)`.
    pub uncapped: f64,
}

/// First-moment bound on the probability of a dominating set of size `gamma - 1`.
pub fn markov_tail(n: usize, gamma: usize, epsilon: f64) -> Result<MarkovTail> {
    check_epsilon(epsilon)?;
    if gamma < 2 {
        return Err(Error::param("gamma", format!("{gamma} < 2")));
    }
    check_gamma(n, gamma - 1)?;
    let uncapped = expected_count(n, gamma - 1, epsilon)?;
    Ok(MarkovTail {
        bound: uncapped.min(1.0),
        uncapped,
    })
}

/// Probability that two `gamma`-sets `A`, `B` with `|A ∩ B| = r` dominate each
/// other's private vertices (`A \ B` by `B`, `B \ A` by `A`).
///
/// Inclusion-exclusion over undominated vertices `I ⊆ A \ B`, `J ⊆ B \ A`
/// needs `gamma |I| + gamma |J| - |I||J|` absent edges, since an edge between
/// `I` and `J` is counted from both sides. Summing over `J` in closed form
/// leaves `sum_i (-1)^i C(s,i) eps^(gamma i) (1 - eps^(gamma - i))^s` with
/// `s = gamma - r`.
pub fn mutual_probability(gamma: usize, r: usize, epsilon: f64) -> f64 {
    let s = gamma - r;
    (0..=s)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let c = binomial_u128(s as u64, i as u64).unwrap() as f64;
            let inner = if i == gamma {
                0.0
            } else {
                (s as f64 * ln_dominated(epsilon, gamma - i)).exp()
            };
            sign * c * epsilon.powi((gamma * i) as i32) * inner
        })
        .sum()
}

/// `ln` of the probability that every vertex outside `A ∪ B` is dominated by
/// both: `(n - 2 gamma + r) ln(1 - 2 eps^gamma + eps^(2 gamma - r))`.
fn ln_outside(n: usize, gamma: usize, r: usize, epsilon: f64) -> f64 {
    let eg = epsilon.powi(gamma as i32);
    let base = -2.0 * eg + epsilon.powi((2 * gamma - r) as i32);
    (n + r - 2 * gamma) as f64 * base.ln_1p()
}

fn check_overlap(n: usize, gamma: usize, r: usize) -> Result<()> {
    if r > gamma || gamma > n || 2 * gamma - r > n {
        return Err(Error::param(
            "r",
            format!("overlap {r} infeasible for gamma = {gamma}, n = {n}"),
        ));
    }
    Ok(())
}

/// Probability that two fixed `gamma`-sets sharing `r` vertices both dominate.
pub fn pair_joint_probability(gamma: usize, r: usize, epsilon: f64, n: usize) -> Result<f64> {
    check_epsilon(epsilon)?;
    check_overlap(n, gamma, r)?;
    Ok(mutual_probability(gamma, r, epsilon) * ln_outside(n, gamma, r, epsilon).exp())
}

/// `ln` of the number of ordered pairs of `gamma`-sets meeting in `r` vertices.
fn ln_pair_count(n: usize, gamma: usize, r: usize) -> f64 {
    ln_binomial(n as u64, gamma as u64)
        + ln_binomial(gamma as u64, r as u64)
        + ln_binomial((n - gamma) as u64, (gamma - r) as u64)
}

/// Overlap sizes that actually occur.
fn overlaps(n: usize, gamma: usize) -> impl Iterator<Item = usize> {
    (0..=gamma).filter(move |&r| 2 * gamma - r <= n)
}

/// Contribution of overlap `r` to `E(X_gamma^2)`.
pub fn second_moment_term(n: usize, gamma: usize, r: usize, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    check_overlap(n, gamma, r)?;
    if r == gamma {
        // identical sets: E(I_i^2) = E(I_i)
        return expected_count(n, gamma, epsilon);
    }
    let mutual = mutual_probability(gamma, r, epsilon);
    Ok(mutual * (ln_pair_count(n, gamma, r) + ln_outside(n, gamma, r, epsilon)).exp())
}

/// `E(X_gamma^2)`, summed exactly over the overlap size of the two sets.
pub fn second_moment_exact(n: usize, gamma: usize, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    check_gamma(n, gamma)?;
    overlaps(n, gamma)
        .map(|r| second_moment_term(n, gamma, r, epsilon))
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Variance {
    /// Reported variance, never negative.
    pub value: f64,
    /// Value before clamping.
    pub raw: f64,
    /// Set when a small negative rounding residue was replaced by zero.
    pub clamped: bool,
}

/// `Var(X_gamma) = E(X_gamma^2) - E(X_gamma)^2`.
///
/// Evaluated as `sum_r N_r q^2 expm1(ln P_r - 2 ln q)` with `N_r` the pair
/// counts, `P_r` the joint probabilities and `q` the single-set probability;
/// since `sum_r N_r = C(n,gamma)^2` this is the same quantity without
/// subtracting two large totals.
pub fn variance_exact(n: usize, gamma: usize, epsilon: f64) -> Result<Variance> {
    check_epsilon(epsilon)?;
    check_gamma(n, gamma)?;
    let ln_q = ln_single(n, gamma, epsilon);
    let mut raw = 0.0;
    for r in overlaps(n, gamma) {
        let ln_n = ln_pair_count(n, gamma, r);
        let ln_joint = if r == gamma {
            ln_q
        } else {
            mutual_probability(gamma, r, epsilon).max(0.0).ln() + ln_outside(n, gamma, r, epsilon)
        };
        // N_r q^2 expm1(d), with ln|expm1(d)| taken in log space so neither factor over- or underflows
        let d = ln_joint - 2.0 * ln_q;
        let ln_mag = if d > 0.0 {
            d + (-(-d).exp()).ln_1p()
        } else {
            (-d.exp_m1()).ln()
        };
        raw += d.signum() * (ln_n + 2.0 * ln_q + ln_mag).exp();
    }
    if raw >= 0.0 {
        return Ok(Variance {
            value: raw,
            raw,
            clamped: false,
        });
    }
    let second = second_moment_exact(n, gamma, epsilon)?;
    if -raw <= VARIANCE_CLAMP_TOLERANCE * second {
        Ok(Variance {
            value: 0.0,
            raw,
            clamped: true,
        })
    } else {
        Err(Error::NegativeVariance {
            value: raw,
            second_moment: second,
        })
    }
}

/// Chebyshev bound `Var / (phi n^(gamma - 1/2))^2` on
/// `P(|X_gamma - E X_gamma| >= phi n^(gamma - 1/2))`.
pub fn chebyshev_tail(n: usize, gamma: usize, epsilon: f64, phi: f64) -> Result<f64> {
    if !(phi > 0.0) {
        return Err(Error::param("phi", format!("{phi} must be positive")));
    }
    let var = variance_exact(n, gamma, epsilon)?.value;
    Ok(chebyshev_from_variance(var, n, gamma, phi))
}

fn chebyshev_from_variance(var: f64, n: usize, gamma: usize, phi: f64) -> f64 {
    let scale = phi * (n as f64).powf(gamma as f64 - 0.5);
    var / (scale * scale)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentReport {
    pub n: usize,
    pub gamma: usize,
    pub epsilon: f64,
    /// `None` when `gamma < 2`.
    pub markov: Option<MarkovTail>,
    pub expected: f64,
    pub expected_fraction: f64,
    pub second_moment: f64,
    pub variance: Variance,
    pub phi: f64,
    pub chebyshev: f64,
}

impl MomentReport {
    pub fn new(n: usize, gamma: usize, epsilon: f64, phi: f64) -> Result<Self> {
        if !(phi > 0.0) {
            return Err(Error::param("phi", format!("{phi} must be positive")));
        }
        let expected = expected_count(n, gamma, epsilon)?;
        let variance = variance_exact(n, gamma, epsilon)?;
        Ok(MomentReport {
            n,
            gamma,
            epsilon,
            markov: if gamma >= 2 {
                Some(markov_tail(n, gamma, epsilon)?)
            } else {
                None
            },
            expected,
            expected_fraction: (ln_single(n, gamma, epsilon)).exp(),
            second_moment: second_moment_exact(n, gamma, epsilon)?,
            variance,
            phi,
            chebyshev: chebyshev_from_variance(variance.value, n, gamma, phi),
        })
    }

    pub fn chebyshev_tail(&self, phi: f64) -> f64 {
        chebyshev_from_variance(self.variance.value, self.n, self.gamma, phi)
    }
}

/// Exact integer coefficients of the mutual-domination probability as a
/// polynomial in `eps`: the coefficient of `eps^e` is
/// `sum over gamma(i+j) - ij = e` of `(-1)^(i+j) C(s,i) C(s,j)`, `s = gamma - r`.
/// Zero coefficients are omitted.
pub fn mutual_coefficients(gamma: usize, r: usize) -> BTreeMap<usize, i128> {
    let s = gamma - r;
    let mut coeffs = BTreeMap::new();
    for i in 0..=s {
        for j in 0..=s {
            let e = gamma * (i + j) - i * j;
            let c = (binomial_u128(s as u64, i as u64).unwrap() * binomial_u128(s as u64, j as u64).unwrap()) as i128;
            *coeffs.entry(e).or_insert(0) += if (i + j) % 2 == 0 { c } else { -c };
        }
    }
    coeffs.retain(|_, c| *c != 0);
    coeffs
}

// ---------------------------------------------------------------------------
// counting bounds

/// `n^(gamma - 1 - 1/(gamma-1)) / gamma!`: order of the guaranteed number of
/// non-dominating `gamma`-sets. Undefined for `gamma = 2`, where every pair may
/// dominate.
pub fn cor24_lower_bound(n: usize, gamma: usize) -> Result<f64> {
    if gamma < 3 {
        return Err(Error::param(
            "gamma",
            format!("{gamma} < 3; for gamma = 2 every pair of vertices may dominate"),
        ));
    }
    let g = gamma as f64;
    Ok((n as f64).powf(g - 1.0 - 1.0 / (g - 1.0)) / factorial_f64(gamma as u64))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsBracket {
    pub gamma: usize,
    pub n: usize,
    #[serde(serialize_with = "crate::serde_decimal::serialize")]
    pub total: BigUint,
    /// `n^(gamma - 1 - 1/(gamma-1)) / gamma!`, the unavoidable defect.
    pub upper_defect: f64,
    /// `(ln n)^gamma n^(gamma - 1/(gamma-1))`, the achievable defect.
    pub lower_defect: f64,
    /// Smallest `n >= 2` from which `upper_defect <= lower_defect`.
    pub crossover_n: usize,
    pub defects_ordered: bool,
    /// Smallest `n >= gamma` with `upper_defect < C(n, gamma)`.
    pub upper_below_total_from: usize,
}

fn ln_upper_defect(n: usize, gamma: usize) -> f64 {
    let g = gamma as f64;
    (g - 1.0 - 1.0 / (g - 1.0)) * (n as f64).ln() - factorial_f64(gamma as u64).ln()
}

fn ln_lower_defect(n: usize, gamma: usize) -> f64 {
    let g = gamma as f64;
    g * (n as f64).ln().ln() + (g - 1.0 / (g - 1.0)) * (n as f64).ln()
}

/// Both sides of the bracket `C(n,gamma) - lower_defect <= M <= C(n,gamma) - upper_defect`
/// on the maximum number `M` of minimum dominating sets, with unit constants.
pub fn cor32_bracket(n: usize, gamma: usize) -> Result<BoundsBracket> {
    if gamma < 3 {
        return Err(Error::param("gamma", format!("{gamma} < 3")));
    }
    if n < gamma.max(2) {
        return Err(Error::SetSize { k: gamma, n });
    }
    // the ratio upper/lower = 1 / (gamma! (ln n)^gamma n) decreases for n >= 2
    let crossover_n = (2..)
        .find(|&m| ln_upper_defect(m, gamma) <= ln_lower_defect(m, gamma))
        .unwrap();
    let upper_below_total_from = (gamma..)
        .find(|&m| ln_upper_defect(m, gamma) < ln_binomial(m as u64, gamma as u64))
        .unwrap();
    Ok(BoundsBracket {
        gamma,
        n,
        total: binomial(n as u64, gamma as u64),
        upper_defect: ln_upper_defect(n, gamma).exp(),
        lower_defect: ln_lower_defect(n, gamma).exp(),
        crossover_n,
        defects_ordered: n >= crossover_n,
        upper_below_total_from,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Eq1Report {
    pub b: usize,
    pub n: usize,
    /// Largest `a >= b` with `C(n,b) > n C(a,b)`.
    pub a_star: Option<u64>,
    /// `n^((b-1)/b)`.
    pub root: f64,
    /// Whether `(a_star + 1)^b >= n^(b-1)`, compared exactly.
    pub witness_holds: Option<bool>,
}

/// Largest `a` for which a graph without dominating `b`-sets must have a row
/// of its s-adjacency matrix with at least `a + 1` zeros.
pub fn eq1_max_a(n: usize, b: usize) -> Result<Eq1Report> {
    if b < 2 {
        return Err(Error::param(
            "b",
            "C(n,1) > n C(a,1) is impossible to satisfy for b = 1",
        ));
    }
    let lhs = binomial(n as u64, b as u64);
    let nn = BigUint::from(n);
    let holds = |a: u64| lhs > &nn * binomial(a, b as u64);

    let b64 = b as u64;
    let a_star = if !holds(b64) {
        None
    } else {
        // holds(a) is monotone: true on [b, a*], false from a* + 1 (at the latest at a = n)
        let (mut lo, mut hi) = (b64, (n as u64).max(b64 + 1));
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if holds(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(lo)
    };
    let witness_holds = a_star.map(|a| {
        let lhs: BigUint = Pow::pow(BigUint::from(a + 1), b as u32);
        let rhs: BigUint = Pow::pow(nn.clone(), (b - 1) as u32);
        lhs >= rhs
    });
    Ok(Eq1Report {
        b,
        n,
        a_star,
        root: (n as f64).powf((b as f64 - 1.0) / b as f64),
        witness_holds,
    })
}

/// `C(a,b) b! / a^b = prod_{i<b} (1 - i/a)`.
pub fn lemma_ratio(a: u64, b: u64) -> Result<f64> {
    if b == 0 || a < b {
        return Err(Error::param("a", format!("need a >= b >= 1, got a = {a}, b = {b}")));
    }
    Ok((0..b).map(|i| 1.0 - i as f64 / a as f64).product())
}
