//! Fair Share accounting and ex-post domination between rules.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{normalize_problem, Allocation, DiscreteProblem, ObjectKind, ValueProfile};
use crate::rules::{allocate, RuleId};

/// Default tolerance of [`verify_fair_share`].
pub const FS_TOL: f64 = 1e-9;

/// The per-agent bound a rule must respect at profile `x` to guarantee
/// Fair Share with parameter `theta`.
///
/// Goods get the lower bound `max{1/n + θ/(n-1) (1 - x̄/x_i), 0}`, bads the
/// upper bound `min{1/n + θ/(n-1) (x̄/x_i - 1), 1}`, with `1/0 = +∞`.
pub fn fair_share_bound(x: &ValueProfile, i: usize, theta: f64, kind: ObjectKind) -> Result<f64> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::InvalidTheta {
            value: theta,
            range: "[0,1]",
        });
    }
    let n = x.n();
    if i >= n {
        return Err(Error::AgentOutOfRange { index: i, n });
    }
    let nf = n as f64;
    let mean = x.mean();
    let xi = x.values()[i];
    if xi == mean {
        return Ok(1.0 / nf);
    }
    let ratio = if xi == 0.0 { f64::INFINITY } else { mean / xi };
    let coef = theta / (nf - 1.0);
    Ok(match kind {
        ObjectKind::Good => (1.0 / nf + coef * (1.0 - ratio)).max(0.0),
        ObjectKind::Bad => (1.0 / nf + coef * (ratio - 1.0)).min(1.0),
    })
}

/// Expected normalized (dis)utility per agent, fair share verdicts and the
/// social value of one rule on one problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WelfareReport {
    pub kind: ObjectKind,
    pub per_agent: Vec<f64>,
    pub social_value: f64,
    pub fs_ok: Vec<bool>,
    /// `per_agent_i - 1/n`.
    pub fs_margin: Vec<f64>,
}

impl WelfareReport {
    pub fn new(kind: ObjectKind, per_agent: Vec<f64>, tol: f64) -> Self {
        let n = per_agent.len() as f64;
        let fs_margin: Vec<f64> = per_agent.iter().map(|v| v - 1.0 / n).collect();
        let fs_ok = fs_margin
            .iter()
            .map(|&m| match kind {
                ObjectKind::Good => m >= -tol,
                ObjectKind::Bad => m <= tol,
            })
            .collect();
        Self {
            kind,
            social_value: per_agent.iter().sum(),
            per_agent,
            fs_ok,
            fs_margin,
        }
    }

    pub fn fair(&self) -> bool {
        self.fs_ok.iter().all(|&ok| ok)
    }

    /// Agents whose Fair Share guarantee fails.
    pub fn violations(&self) -> Vec<usize> {
        (0..self.fs_ok.len()).filter(|&i| !self.fs_ok[i]).collect()
    }
}

/// `E[φ_i(X*) X*_i]` for every agent, with `φ` any statewise map from
/// normalized profiles to allocations.
pub fn agent_expected_values_with<F>(p: &DiscreteProblem, mut rule: F) -> Result<Vec<f64>>
where
    F: FnMut(&ValueProfile) -> Result<Allocation>,
{
    let q = normalize_problem(p);
    let mut out = vec![0.0; q.n()];
    for (k, s) in q.states().iter().enumerate() {
        let a = rule(&q.profile(k))?;
        for ((o, share), v) in out.iter_mut().zip(a.shares()).zip(&s.values) {
            *o += s.prob * share * v;
        }
    }
    Ok(out)
}

pub fn agent_expected_values(p: &DiscreteProblem, rule: RuleId) -> Result<Vec<f64>> {
    rule.check_kind(p.kind())?;
    agent_expected_values_with(p, |x| allocate(rule, x, p.kind()))
}

/// Expected sum of normalized (dis)utilities.
pub fn social_value(p: &DiscreteProblem, rule: RuleId) -> Result<f64> {
    Ok(agent_expected_values(p, rule)?.iter().sum())
}

pub fn verify_fair_share(p: &DiscreteProblem, rule: RuleId, tol: f64) -> Result<WelfareReport> {
    let per_agent = agent_expected_values(p, rule)?;
    Ok(WelfareReport::new(p.kind(), per_agent, tol))
}

pub fn verify_fair_share_with<F>(p: &DiscreteProblem, rule: F, tol: f64) -> Result<WelfareReport>
where
    F: FnMut(&ValueProfile) -> Result<Allocation>,
{
    let per_agent = agent_expected_values_with(p, rule)?;
    Ok(WelfareReport::new(p.kind(), per_agent, tol))
}

/// Which profiles [`dominates`] compares two rules on.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbePlan {
    /// Lattice resolution: profiles `k/steps` with `Σ k = steps`.
    pub lattice_steps: usize,
    /// Largest `n` for which the full simplex lattice is enumerated.
    pub lattice_max_n: usize,
    pub random: usize,
    pub seed: u64,
    /// Relative size of the perturbation applied to tied entries.
    pub tie_jitter: f64,
    pub include_known_witnesses: bool,
    pub extra: Vec<ValueProfile>,
}

impl Default for ProbePlan {
    fn default() -> Self {
        Self {
            lattice_steps: 20,
            lattice_max_n: 4,
            random: 10_000,
            seed: 0,
            tie_jitter: 1e-9,
            include_known_witnesses: true,
            extra: Vec::new(),
        }
    }
}

impl ProbePlan {
    /// The full, deterministic probe set for `n` agents.
    pub fn profiles(&self, n: usize) -> Vec<ValueProfile> {
        let mut raw: Vec<Vec<f64>> = Vec::new();
        if n <= self.lattice_max_n && self.lattice_steps > 0 {
            let steps = self.lattice_steps;
            let mut cur = vec![0usize; n];
            compositions(steps, 0, &mut cur, &mut |c| {
                raw.push(c.iter().map(|&k| k as f64 / steps as f64).collect())
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..self.random {
            let power = rng.random_range(1..=3);
            let v: Vec<f64> = (0..n)
                .map(|_| {
                    let e = -(1.0 - rng.random::<f64>()).ln();
                    e.powi(power)
                })
                .collect();
            let total: f64 = v.iter().sum();
            raw.push(v.iter().map(|x| x / total).collect());
        }
        if self.include_known_witnesses {
            raw.extend(known_witnesses(n));
        }
        raw.extend(self.extra.iter().map(|x| x.values().to_vec()));

        let mut jittered = Vec::new();
        if self.tie_jitter > 0.0 {
            for v in &raw {
                if let Some(i) = first_tied(v) {
                    for sign in [1.0, -1.0] {
                        let mut w = v.clone();
                        let scale = w.iter().cloned().fold(0.0, f64::max).max(1.0);
                        w[i] = (w[i] + sign * self.tie_jitter * scale).max(0.0);
                        jittered.push(w);
                    }
                }
            }
        }
        raw.extend(jittered);
        raw.into_iter()
            .filter_map(|v| ValueProfile::new(v).ok())
            .collect()
    }
}

fn compositions(left: usize, pos: usize, cur: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        emit(cur);
        return;
    }
    for k in 0..=left {
        cur[pos] = k;
        compositions(left - k, pos + 1, cur, emit);
    }
}

fn first_tied(v: &[f64]) -> Option<usize> {
    (0..v.len()).find(|&i| v[i + 1..].contains(&v[i]))
}

/// Profiles on which the Top-Heavy and Bottom-Heavy families are known to
/// separate.
fn known_witnesses(n: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for y in [1.25, 1.5, 2.0, 2f64.sqrt(), 3.0] {
        let mut v = vec![1.0; n];
        v[n - 1] = y;
        out.push(v);
        let mut w = vec![y; n];
        w[0] = 1.0;
        out.push(w);
    }
    if n == 3 {
        out.push(vec![0.75, 0.75, 1.5]);
        for theta in [0.25, 0.5, 0.75, 1.0] {
            out.push(vec![theta / 3.0, 1.75 - theta / 3.0, 1.25]);
        }
    }
    out
}

/// Outcome of comparing the realized social values of two rules.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum DominationVerdict {
    /// `a` is weakly better on every probe and strictly better at `witness`.
    Dominates { witness: ValueProfile },
    /// `b` is weakly better on every probe and strictly better at `witness`.
    DominatedBy { witness: ValueProfile },
    /// Each rule is strictly better somewhere.
    Incomparable {
        a_better: ValueProfile,
        b_better: ValueProfile,
    },
    /// Identical allocations on every probe.
    Equal,
    /// Same social value on every probe although allocations differ.
    NoViolationFound,
}

/// Realized social value of `a` minus that of `b` at `x`, signed so that a
/// positive gap means `a` is better.
pub fn welfare_gap(a: RuleId, b: RuleId, kind: ObjectKind, x: &ValueProfile) -> Result<f64> {
    let wa = allocate(a, x, kind)?.welfare(x);
    let wb = allocate(b, x, kind)?.welfare(x);
    Ok(match kind {
        ObjectKind::Good => wa - wb,
        ObjectKind::Bad => wb - wa,
    })
}

fn gap_tol(x: &ValueProfile) -> f64 {
    1e-12 * x.sum().max(1.0)
}

fn lex_min(a: Option<ValueProfile>, b: Option<ValueProfile>) -> Option<ValueProfile> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if lex_cmp(&b, &a) == Ordering::Less { b } else { a }),
        (a, b) => a.or(b),
    }
}

fn lex_cmp(a: &ValueProfile, b: &ValueProfile) -> Ordering {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

#[derive(Default)]
struct Tally {
    a_better: Option<ValueProfile>,
    b_better: Option<ValueProfile>,
    identical: bool,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally {
            a_better: lex_min(self.a_better, other.a_better),
            b_better: lex_min(self.b_better, other.b_better),
            identical: self.identical && other.identical,
        }
    }
}

/// Sampled test of ex-post domination of rule `a` over rule `b`.
///
/// The quantifier ranges over every profile, so a verdict other than
/// [`DominationVerdict::Incomparable`] is evidence, not proof. Reported
/// witnesses are the lexicographically smallest probes found.
pub fn dominates(
    a: RuleId,
    b: RuleId,
    kind: ObjectKind,
    n: usize,
    plan: &ProbePlan,
) -> Result<DominationVerdict> {
    a.check_kind(kind)?;
    b.check_kind(kind)?;
    if n < 2 {
        return Err(Error::TooFewAgents(n));
    }
    let probes = plan.profiles(n);
    let tally = probes
        .into_par_iter()
        .map(|x| -> Result<Tally> {
            let fa = allocate(a, &x, kind)?;
            let fb = allocate(b, &x, kind)?;
            let (wa, wb) = (fa.welfare(&x), fb.welfare(&x));
            let tol = gap_tol(&x);
            let identical = fa == fb;
            let mut t = Tally {
                identical,
                ..Tally::default()
            };
            if kind.prefers(wa, wb) && (wa - wb).abs() > tol {
                t.a_better = Some(x);
            } else if kind.prefers(wb, wa) && (wa - wb).abs() > tol {
                t.b_better = Some(x);
            }
            Ok(t)
        })
        .try_reduce(
            || Tally {
                identical: true,
                ..Tally::default()
            },
            |l, r| Ok(l.merge(r)),
        )?;
    Ok(match (tally.a_better, tally.b_better) {
        (Some(a_better), Some(b_better)) => DominationVerdict::Incomparable { a_better, b_better },
        (Some(witness), None) => DominationVerdict::Dominates { witness },
        (None, Some(witness)) => DominationVerdict::DominatedBy { witness },
        (None, None) if tally.identical => DominationVerdict::Equal,
        (None, None) => DominationVerdict::NoViolationFound,
    })
}
