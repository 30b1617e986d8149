//! Competitive Ratio and Price of Fairness of rules: closed forms, a
//! numerical sup-search over profiles, and hard instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{DiscreteProblem, ObjectKind, State, ValueProfile};
use crate::opt::optimal_fair_rule;
use crate::rules::{allocate, RuleId, Theta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    ClosedForm,
    Search,
    Lp,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Witness {
    Profile(ValueProfile),
    Problem(DiscreteProblem),
}

/// A worst-case or per-problem efficiency ratio and how it was obtained.
///
/// A [`Method::Search`] value is a lower bound on a supremum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub value: f64,
    pub method: Method,
    pub witness: Option<Witness>,
    pub bounds: Option<(f64, f64)>,
}

impl RatioReport {
    fn closed(value: f64) -> Self {
        Self {
            value,
            method: Method::ClosedForm,
            witness: None,
            bounds: None,
        }
    }

    pub fn witness_profile(&self) -> Option<&ValueProfile> {
        match &self.witness {
            Some(Witness::Profile(x)) => Some(x),
            _ => None,
        }
    }
}

/// `CR_n` of the Top-Heavy rule: `n / (2 sqrt((n-1+θ)θ) + 1 - 2θ)`.
pub fn cr_closed_form_top_heavy(n: usize, theta: Theta) -> f64 {
    let (n, t) = (n as f64, theta.value());
    n / (2.0 * ((n - 1.0 + t) * t).sqrt() + 1.0 - 2.0 * t)
}

/// `CR_n` of the Top-Heavy rule as the worst case over profiles
/// `(0,…,0, y,…,y, x_n)` with `i - 1` zeros, for `i` in `1..n`.
///
/// The case `i = 1` is [`cr_closed_form_top_heavy`]; for `θ = 1` and
/// `n >= 4` a profile with zeros is strictly worse.
pub fn cr_top_heavy_exact(n: usize, theta: Theta) -> f64 {
    let (nf, t) = (n as f64, theta.value());
    (1..n)
        .map(|i| {
            let i = i as f64;
            let inner = (i + 1.0) * t - 2.0 * ((nf - 1.0 + i * t) * t).sqrt();
            1.0 / (i / nf - (nf - i) / (nf * (nf - 1.0)) * inner)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `CR_n` of the Proportional rule: `(sqrt n + 1)/2` for a good, `n` for a bad.
pub fn cr_closed_form_proportional(n: usize, kind: ObjectKind) -> f64 {
    match kind {
        ObjectKind::Good => ((n as f64).sqrt() + 1.0) / 2.0,
        ObjectKind::Bad => n as f64,
    }
}

/// Lower and upper bounds on `CR_n` of the Bottom-Heavy rule.
pub fn cr_bounds_bottom_heavy(n: usize) -> (f64, f64) {
    let n = n as f64;
    (n / 4.0 + 0.5 + 1.0 / (4.0 * n), n / 4.0 + 1.25)
}

/// Smallest Price of Fairness over all fair rules. Exact for a bad; for a
/// good only bounds are known and `value` is the upper bound.
pub fn inf_pof(n: usize, kind: ObjectKind) -> RatioReport {
    let nf = n as f64;
    match kind {
        ObjectKind::Bad => RatioReport::closed((nf + 1.0).powi(2) / (4.0 * nf)),
        ObjectKind::Good => {
            let root = nf.sqrt();
            let (lo, hi) = (nf / (2.0 * root - 0.5), nf / (2.0 * root - 1.0));
            RatioReport {
                bounds: Some((lo, hi)),
                ..RatioReport::closed(hi)
            }
        }
    }
}

/// Exact worst case of the Bottom-Heavy rule for two agents.
///
/// On profiles `(1, t)` with `t` in `[1, 2]` the ratio is `(3t - t²)/2`,
/// and it is 1 for `t >= 2`; the maximum sits at the vertex `t = 3/2`.
pub fn bottom_heavy_two_agent_exact() -> RatioReport {
    let t: f64 = 1.5;
    RatioReport {
        value: (3.0 * t - t * t) / 2.0,
        method: Method::ClosedForm,
        witness: Some(Witness::Profile(
            ValueProfile::new(vec![1.0 / (1.0 + t), t / (1.0 + t)]).expect("valid"),
        )),
        bounds: None,
    }
}

/// `max_i x_i / Σ φ_i x_i` for a good, `Σ φ_i x_i / min_i x_i` for a bad,
/// with `0/0 = 1`.
pub fn lemma1_objective(rule: RuleId, kind: ObjectKind, x: &ValueProfile) -> Result<f64> {
    let w = allocate(rule, x, kind)?.welfare(x);
    let (num, den) = match kind {
        ObjectKind::Good => (x.max(), w),
        ObjectKind::Bad => (w, x.min()),
    };
    Ok(if den > 0.0 {
        num / den
    } else if num > 0.0 {
        f64::INFINITY
    } else {
        1.0
    })
}

struct Searcher {
    rule: RuleId,
    kind: ObjectKind,
}

impl Searcher {
    fn eval(&self, v: &[f64]) -> f64 {
        match ValueProfile::new(v.to_vec()) {
            Ok(x) => lemma1_objective(self.rule, self.kind, &x).unwrap_or(f64::NEG_INFINITY),
            Err(_) => f64::NEG_INFINITY,
        }
    }

    /// Coordinate sweeps over the box `[0, 1]^n`: a grid scan per coordinate
    /// followed by golden-section refinement, rescaling so the largest
    /// entry stays 1.
    fn refine(&self, mut x: Vec<f64>, sweeps: usize, scan: usize) -> (f64, Vec<f64>) {
        rescale(&mut x);
        let mut best = self.eval(&x);
        for _ in 0..sweeps {
            let before = best;
            for i in 0..x.len() {
                let mut y = x.clone();
                let at = |c: f64, y: &mut Vec<f64>| {
                    y[i] = c;
                    self.eval(y)
                };
                let (mut arg, mut val) = (x[i], best);
                for s in 0..=scan {
                    let c = s as f64 / scan as f64;
                    let f = at(c, &mut y);
                    if f > val {
                        (arg, val) = (c, f);
                    }
                }
                let h = 1.0 / scan as f64;
                let (g_arg, g_val) = golden(|c| at(c, &mut y), (arg - h).max(0.0), (arg + h).min(1.0));
                if g_val > val {
                    (arg, val) = (g_arg, g_val);
                }
                if val > best {
                    x[i] = arg;
                    best = val;
                }
            }
            rescale(&mut x);
            best = self.eval(&x).max(best);
            if best - before <= 1e-10 * before.abs() {
                break;
            }
        }
        (best, x)
    }
}

fn rescale(x: &mut [f64]) {
    let m = x.iter().copied().fold(0.0, f64::max);
    if m > 0.0 {
        x.iter_mut().for_each(|v| *v /= m);
    }
}

fn golden(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if (b - a).abs() < 1e-12 {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Two-level profiles `(a,…,a, 1,…,1)` with `k` entries at `a`; the ratio
/// `a` is scanned on a log grid and refined by golden section.
fn two_level_starts(s: &Searcher, n: usize) -> Vec<Vec<f64>> {
    let profile = |k: usize, la: f64| -> Vec<f64> {
        let a = la.exp();
        let mut v: Vec<f64> = (0..n).map(|i| if i < k { a } else { 1.0 }).collect();
        rescale(&mut v);
        v
    };
    let mut out = Vec::new();
    for k in 1..n {
        let grid: Vec<f64> = (0..=128).map(|j| -5.0 + 10.0 * j as f64 / 128.0).collect();
        let (mut arg, mut val) = (0.0, f64::NEG_INFINITY);
        for &la in &grid {
            let f = s.eval(&profile(k, la));
            if f > val {
                (arg, val) = (la, f);
            }
        }
        let h = 10.0 / 128.0;
        let (g, gv) = golden(|la| s.eval(&profile(k, la)), arg - h, arg + h);
        if gv > val {
            arg = g;
        }
        out.push(profile(k, arg));
    }
    out
}

fn subset_starts(n: usize) -> Vec<Vec<f64>> {
    if n > 10 {
        return Vec::new();
    }
    (1..(1u32 << n) - 1)
        .map(|mask| {
            (0..n)
                .map(|i| if mask >> i & 1 == 1 { 1.0 } else { 1e-3 })
                .collect()
        })
        .collect()
}

fn random_start(seed: u64, index: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let power = rng.random_range(1..=3);
    (0..n)
        .map(|_| (-(1.0 - rng.random::<f64>()).ln()).powi(power))
        .collect()
}

/// Numerical supremum of the ratio objective of a scale-invariant rule.
///
/// Structured starts (subset indicators and refined two-level profiles) get
/// a full local search; each of the `restarts` seeded random starts gets a
/// short one. The result is the best value over all starts, so it never
/// decreases when `restarts` grows, and it does not depend on the number of
/// worker threads.
pub fn cr_search(
    rule: RuleId,
    n: usize,
    kind: ObjectKind,
    restarts: usize,
    seed: u64,
) -> Result<RatioReport> {
    rule.check_kind(kind)?;
    if n < 2 {
        return Err(Error::TooFewAgents(n));
    }
    let s = Searcher { rule, kind };
    let mut structured = two_level_starts(&s, n);
    structured.extend(subset_starts(n));
    structured.push(vec![1.0; n]);

    let refined_structured = structured
        .into_par_iter()
        .map(|x| s.refine(x, 40, 32))
        .collect::<Vec<_>>();
    let refined_random = (0..restarts as u64)
        .into_par_iter()
        .map(|i| s.refine(random_start(seed, i, n), 4, 16))
        .collect::<Vec<_>>();

    let (value, x) = refined_structured
        .into_iter()
        .chain(refined_random)
        .fold((f64::NEG_INFINITY, Vec::new()), |acc, cand| {
            if cand.0 > acc.0 {
                cand
            } else {
                acc
            }
        });
    let total: f64 = x.iter().sum();
    let witness = ValueProfile::new(x.iter().map(|v| v / total).collect())?;
    Ok(RatioReport {
        value,
        method: Method::Search,
        witness: Some(Witness::Profile(witness)),
        bounds: match rule {
            RuleId::BottomHeavy if kind == ObjectKind::Bad => Some(cr_bounds_bottom_heavy(n)),
            _ => None,
        },
    })
}

/// Closed-form `CR_n` when one is known.
pub fn cr_closed_form(rule: RuleId, n: usize, kind: ObjectKind) -> Result<Option<RatioReport>> {
    rule.check_kind(kind)?;
    Ok(match rule {
        RuleId::TopHeavy(theta) => Some(RatioReport::closed(cr_top_heavy_exact(n, theta))),
        RuleId::Proportional => Some(RatioReport::closed(cr_closed_form_proportional(n, kind))),
        RuleId::Utilitarian => Some(RatioReport::closed(1.0)),
        RuleId::BottomHeavy if n == 2 => Some(bottom_heavy_two_agent_exact()),
        RuleId::BottomHeavy => {
            let (lo, hi) = cr_bounds_bottom_heavy(n);
            Some(RatioReport {
                bounds: Some((lo, hi)),
                ..RatioReport::closed(lo)
            })
        }
        RuleId::EqualSplit if kind == ObjectKind::Good => Some(RatioReport::closed(n as f64)),
        _ => None,
    })
}

/// Fair optimum and unconstrained optimum of the problem whose states are
/// the distinct permutations of `x`, equally likely.
pub fn symmetric_lp_value(x: &ValueProfile, kind: ObjectKind) -> Result<(f64, f64)> {
    let mut perms = Vec::new();
    let mut v = x.values().to_vec();
    v.sort_by(f64::total_cmp);
    loop {
        perms.push(v.clone());
        if !next_permutation(&mut v) {
            break;
        }
    }
    let p = 1.0 / perms.len() as f64;
    let problem = DiscreteProblem::new(kind, perms.into_iter().map(|v| State::new(p, v)).collect())?;
    let (_, value) = optimal_fair_rule(&problem)?;
    let mean = x.mean();
    let best = match kind {
        ObjectKind::Good => x.max(),
        ObjectKind::Bad => x.min(),
    };
    Ok((value, best / mean))
}

fn next_permutation(v: &mut [f64]) -> bool {
    let n = v.len();
    let Some(i) = (0..n - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).expect("exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// `m` equally likely states; agent `j < m` values the good at `m` in state
/// `j` and 0 elsewhere, the other `n - m` agents value it at 1 throughout.
pub fn hard_instance_good(n: usize, m: usize) -> Result<DiscreteProblem> {
    if m == 0 || m >= n {
        return Err(Error::InvalidM { n, m });
    }
    let states = (0..m)
        .map(|s| {
            let values = (0..n)
                .map(|i| match i {
                    i if i >= m => 1.0,
                    i if i == s => m as f64,
                    _ => 0.0,
                })
                .collect();
            State::new(1.0 / m as f64, values)
        })
        .collect();
    DiscreteProblem::new(ObjectKind::Good, states)
}

/// Two equally likely states `(4/(n+1), 2, …, 2)` and `(2(n-1)/(n+1), 0, …, 0)`.
pub fn hard_instance_bad(n: usize) -> Result<DiscreteProblem> {
    if n < 2 {
        return Err(Error::TooFewAgents(n));
    }
    let nf = n as f64;
    let mut a = vec![2.0; n];
    a[0] = 4.0 / (nf + 1.0);
    let mut b = vec![0.0; n];
    b[0] = 2.0 * (nf - 1.0) / (nf + 1.0);
    DiscreteProblem::new(ObjectKind::Bad, vec![State::new(0.5, a), State::new(0.5, b)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn top_heavy_closed_form() {
        assert_relative_eq!(
            cr_closed_form_top_heavy(2, Theta::ONE),
            2.0 / (2.0 * 2f64.sqrt() - 1.0),
            max_relative = 1e-15
        );
        assert_relative_eq!(cr_closed_form_top_heavy(100, Theta::ONE), 100.0 / 19.0, max_relative = 1e-15);
        assert!(
            cr_closed_form_top_heavy(2, Theta::new(0.25).unwrap())
                > cr_closed_form_top_heavy(2, Theta::ONE)
        );
    }

    #[test]
    fn top_heavy_closed_form_decreases_in_theta() {
        for n in 2..=40 {
            let mut prev = f64::INFINITY;
            for k in 1..=100 {
                let v = cr_closed_form_top_heavy(n, Theta::new(k as f64 / 100.0).unwrap());
                assert!(v < prev, "n={n} k={k}");
                prev = v;
            }
        }
    }

    #[test]
    fn exact_top_heavy_form() {
        for n in 2..=3 {
            for t in [0.1, 0.5, 1.0] {
                let th = Theta::new(t).unwrap();
                assert_relative_eq!(cr_top_heavy_exact(n, th), cr_closed_form_top_heavy(n, th), max_relative = 1e-14);
            }
        }
        // one zero agent: 1 / (1/2 + (2 sqrt 5 - 3)/6) = 3 / sqrt 5
        assert_relative_eq!(cr_top_heavy_exact(4, Theta::ONE), 3.0 / 5f64.sqrt(), max_relative = 1e-14);
        assert!(cr_top_heavy_exact(4, Theta::ONE) > cr_closed_form_top_heavy(4, Theta::ONE));
    }

    #[test]
    fn proportional_and_bottom_heavy_forms() {
        assert_relative_eq!(cr_closed_form_proportional(2, ObjectKind::Good), 1.2071067811865475);
        assert_eq!(cr_closed_form_proportional(2, ObjectKind::Bad), 2.0);
        assert_eq!(cr_closed_form_proportional(4, ObjectKind::Good), 1.5);
        assert_eq!(cr_bounds_bottom_heavy(2), (1.125, 1.75));
        let (lo, hi) = cr_bounds_bottom_heavy(100);
        assert_abs_diff_eq!(lo, 25.5025, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 26.25, epsilon = 1e-12);
    }

    #[test]
    fn inf_pof_values() {
        assert_eq!(inf_pof(2, ObjectKind::Bad).value, 1.125);
        assert_abs_diff_eq!(inf_pof(10_000, ObjectKind::Bad).value, 2500.500025, epsilon = 1e-9);
        let g = inf_pof(2, ObjectKind::Good);
        let (lo, hi) = g.bounds.unwrap();
        assert_abs_diff_eq!(lo, 2.0 / (2.0 * 2f64.sqrt() - 0.5), epsilon = 1e-15);
        assert!(lo < 1.0);
        assert_abs_diff_eq!(hi, 1.0938, epsilon = 1e-4);
        assert_eq!(g.value, hi);
    }

    #[test]
    fn bottom_heavy_exact_two_agents() {
        let r = bottom_heavy_two_agent_exact();
        assert_eq!(r.value, 1.125);
        let x = r.witness_profile().unwrap();
        assert_abs_diff_eq!(
            lemma1_objective(RuleId::BottomHeavy, ObjectKind::Bad, x).unwrap(),
            1.125,
            epsilon = 1e-12
        );
    }

    #[test]
    fn search_two_agents() {
        let th = cr_search(RuleId::TopHeavy(Theta::ONE), 2, ObjectKind::Good, 20, 1).unwrap();
        assert_relative_eq!(th.value, 2.0 / (2.0 * 2f64.sqrt() - 1.0), max_relative = 1e-6);
        let w = th.witness_profile().unwrap().values();
        assert_relative_eq!(w[1].max(w[0]) / w[1].min(w[0]), 2f64.sqrt(), max_relative = 1e-3);

        let bh = cr_search(RuleId::BottomHeavy, 2, ObjectKind::Bad, 20, 1).unwrap();
        assert_abs_diff_eq!(bh.value, 1.125, epsilon = 1e-9);

        let pro = cr_search(RuleId::Proportional, 2, ObjectKind::Good, 20, 1).unwrap();
        assert_relative_eq!(pro.value, (2f64.sqrt() + 1.0) / 2.0, max_relative = 1e-6);
    }

    #[test]
    fn search_guards() {
        assert!(matches!(
            cr_search(RuleId::BottomHeavy, 3, ObjectKind::Good, 1, 0),
            Err(Error::RuleKindMismatch { .. })
        ));
    }

    #[test]
    fn hard_instances() {
        let p = hard_instance_good(4, 2).unwrap();
        assert_eq!(p.states()[0].values, vec![2.0, 0.0, 1.0, 1.0]);
        assert_eq!(p.states()[1].values, vec![0.0, 2.0, 1.0, 1.0]);
        assert!(p.is_normalized());
        let single = hard_instance_good(2, 1).unwrap();
        assert_eq!(single.states().len(), 1);
        assert_eq!(hard_instance_good(3, 3).unwrap_err(), Error::InvalidM { n: 3, m: 3 });

        let b = hard_instance_bad(2).unwrap();
        assert_eq!(b.states()[0].values, vec![4.0 / 3.0, 2.0]);
        assert_eq!(b.states()[1].values, vec![2.0 / 3.0, 0.0]);
        assert!(b.is_normalized());
    }

    #[test]
    fn permutations_are_distinct() {
        let mut v = vec![1.0, 1.0, 2.0];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 3);
    }
}
