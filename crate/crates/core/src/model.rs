//! Problem data: priors over value profiles, realized profiles, allocations,
//! and the order statistics the rules branch on.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the total probability mass of a [`DiscreteProblem`].
pub const PROB_SUM_TOL: f64 = 1e-12;

/// Tolerance on the total mass of an [`Allocation`].
pub const SHARE_SUM_TOL: f64 = 1e-12;

/// Whether the divided object is desirable (a good) or undesirable (a bad).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectKind {
    Good,
    Bad,
}

impl ObjectKind {
    /// `true` if `a` is a strictly better social value than `b` for this kind.
    pub fn prefers(self, a: f64, b: f64) -> bool {
        match self {
            ObjectKind::Good => a > b,
            ObjectKind::Bad => a < b,
        }
    }
}

impl fmt::Display for ObjectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObjectKind::Good => "good",
            ObjectKind::Bad => "bad",
        })
    }
}

/// One atom of a finite prior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub prob: f64,
    pub values: Vec<f64>,
}

impl State {
    pub fn new(prob: f64, values: Vec<f64>) -> Self {
        Self { prob, values }
    }
}

/// A finite prior over nonnegative value vectors.
///
/// Construction goes through [`validate_problem`], so every instance has
/// probabilities summing to one, nonnegative values, and a strictly positive
/// expected value for every agent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteProblem {
    kind: ObjectKind,
    n: usize,
    states: Vec<State>,
}

impl DiscreteProblem {
    pub fn new(kind: ObjectKind, states: Vec<State>) -> Result<Self> {
        let n = states.first().map_or(0, |s| s.values.len());
        validate_problem(Self { kind, n, states })
    }

    pub fn kind(&self) -> ObjectKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    /// Expected value of every agent, summed in state order.
    pub fn means(&self) -> Vec<f64> {
        let mut means = vec![0.0; self.n];
        for s in &self.states {
            for (m, v) in means.iter_mut().zip(&s.values) {
                *m += s.prob * v;
            }
        }
        means
    }

    pub fn is_normalized(&self) -> bool {
        self.means().iter().all(|m| (m - 1.0).abs() <= PROB_SUM_TOL)
    }

    /// The common expected value when every agent has the same one.
    pub fn common_mean(&self) -> Option<f64> {
        let means = self.means();
        let first = means[0];
        means
            .iter()
            .all(|m| (m - first).abs() <= 1e-12 * first.max(1.0))
            .then_some(first)
    }

    /// Realized profile of state `k`.
    pub fn profile(&self, k: usize) -> ValueProfile {
        ValueProfile(self.states[k].values.clone())
    }
}

/// Checks every invariant of a [`DiscreteProblem`] and returns it unchanged.
pub fn validate_problem(p: DiscreteProblem) -> Result<DiscreteProblem> {
    if p.states.is_empty() {
        return Err(Error::EmptyProblem);
    }
    if p.n < 2 {
        return Err(Error::TooFewAgents(p.n));
    }
    let mut total = 0.0;
    for (k, s) in p.states.iter().enumerate() {
        if s.values.len() != p.n {
            return Err(Error::DimensionMismatch {
                state: k,
                expected: p.n,
                found: s.values.len(),
            });
        }
        if !(0.0..=1.0).contains(&s.prob) {
            return Err(Error::InvalidProbability(s.prob));
        }
        for (i, &v) in s.values.iter().enumerate() {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::NegativeValue {
                    state: k,
                    agent: i,
                    value: v,
                });
            }
        }
        total += s.prob;
    }
    if (total - 1.0).abs() > PROB_SUM_TOL {
        return Err(Error::ProbabilitiesDoNotSumToOne(total));
    }
    if let Some(i) = p.means().iter().position(|&m| m <= 0.0) {
        return Err(Error::ZeroExpectedValue(i));
    }
    Ok(p)
}

/// Divides every agent's values by that agent's expected value.
///
/// Agents whose mean is already 1 (within [`PROB_SUM_TOL`]) are left
/// untouched, which makes the operation idempotent bit for bit.
pub fn normalize_problem(p: &DiscreteProblem) -> DiscreteProblem {
    let means = p.means();
    let states = p
        .states
        .iter()
        .map(|s| State {
            prob: s.prob,
            values: s
                .values
                .iter()
                .zip(&means)
                .map(|(&v, &m)| {
                    if (m - 1.0).abs() <= PROB_SUM_TOL {
                        v
                    } else {
                        v / m
                    }
                })
                .collect(),
        })
        .collect();
    DiscreteProblem {
        kind: p.kind,
        n: p.n,
        states,
    }
}

/// One realized vector of normalized (dis)utilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ValueProfile(Vec<f64>);

impl ValueProfile {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::TooFewAgents(values.len()));
        }
        for (i, &v) in values.iter().enumerate() {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::NegativeValue {
                    state: 0,
                    agent: i,
                    value: v,
                });
            }
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// Sum taken in ascending order, so it is invariant under permutations.
    pub fn sum(&self) -> f64 {
        let mut v = self.0.clone();
        v.sort_by(f64::total_cmp);
        v.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum() / self.0.len() as f64
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Rescales by a positive factor.
    pub fn scaled(&self, factor: f64) -> Self {
        Self(self.0.iter().map(|v| v * factor).collect())
    }

    /// `out[perm[i]] = self[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = vec![0.0; self.0.len()];
        for (i, &p) in perm.iter().enumerate() {
            out[p] = self.0[i];
        }
        Self(out)
    }
}

impl TryFrom<Vec<f64>> for ValueProfile {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<ValueProfile> for Vec<f64> {
    fn from(p: ValueProfile) -> Self {
        p.0
    }
}

/// A lottery over agents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Allocation(Vec<f64>);

impl Allocation {
    /// Checks that shares lie in `[0, 1]` and sum to one.
    pub fn new(shares: Vec<f64>) -> Result<Self> {
        let total: f64 = shares.iter().sum();
        if shares.iter().any(|s| !(0.0..=1.0).contains(s)) || (total - 1.0).abs() > SHARE_SUM_TOL
        {
            return Err(Error::InvalidArgument(format!(
                "not a lottery: {shares:?}"
            )));
        }
        Ok(Self(shares))
    }

    pub(crate) fn from_shares_unchecked(shares: Vec<f64>) -> Self {
        Self(shares)
    }

    pub fn equal(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn shares(&self) -> &[f64] {
        &self.0
    }

    pub fn into_shares(self) -> Vec<f64> {
        self.0
    }

    /// Realized social value `sum_i share_i * x_i`.
    pub fn welfare(&self, x: &ValueProfile) -> f64 {
        self.0.iter().zip(x.values()).map(|(s, v)| s * v).sum()
    }
}

/// Order statistics of a profile, with ties kept as blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderStats {
    sorted: Vec<f64>,
    perm: Vec<usize>,
    levels: Vec<Range<usize>>,
}

impl OrderStats {
    /// Ascending values `x^(1) <= ... <= x^(n)`.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// `perm[r]` is the agent holding rank `r` (0-based).
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// Tie blocks as ranges into [`Self::perm`], in ascending order of value.
    pub fn levels(&self) -> &[Range<usize>] {
        &self.levels
    }

    /// Agents with the largest value.
    pub fn top_set(&self) -> &[usize] {
        let last = self.levels.last().expect("profiles are nonempty");
        &self.perm[last.clone()]
    }

    /// Agents at the level of the `rank`-th order statistic (1-based rank).
    pub fn sigma(&self, rank: usize) -> &[usize] {
        if rank == 0 || rank > self.sorted.len() {
            return &[];
        }
        let block = self
            .levels
            .iter()
            .find(|r| r.contains(&(rank - 1)))
            .expect("levels cover every rank");
        &self.perm[block.clone()]
    }
}

/// Sorts ascending, breaking ties by agent index; tie blocks use exact
/// equality of the stored values.
pub fn order_stats(x: &ValueProfile) -> OrderStats {
    let v = x.values();
    let mut perm: Vec<usize> = (0..v.len()).collect();
    perm.sort_by(|&a, &b| v[a].total_cmp(&v[b]).then(a.cmp(&b)));
    let sorted: Vec<f64> = perm.iter().map(|&i| v[i]).collect();
    let mut levels = Vec::new();
    let mut start = 0;
    for r in 1..=sorted.len() {
        if r == sorted.len() || sorted[r] != sorted[start] {
            levels.push(start..r);
            start = r;
        }
    }
    OrderStats {
        sorted,
        perm,
        levels,
    }
}
