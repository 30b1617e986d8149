//! The optimal fair prior-dependent rule on a finite prior.

mod simplex;

pub use simplex::{simplex_solve, LinearProgram, LpSolution, Row, Sense};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fairness::{social_value, WelfareReport};
use crate::model::{normalize_problem, Allocation, DiscreteProblem, ObjectKind};
use crate::rules::RuleId;

/// Default pivot tolerance.
pub const LP_TOL: f64 = 1e-9;

/// One allocation per state of a problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatewiseRule {
    pub allocations: Vec<Allocation>,
}

impl StatewiseRule {
    /// `E[φ_i X*_i]` per agent on the normalized problem.
    pub fn expected_values(&self, p: &DiscreteProblem) -> Vec<f64> {
        let q = normalize_problem(p);
        let mut out = vec![0.0; q.n()];
        for (s, a) in q.states().iter().zip(&self.allocations) {
            for ((o, share), v) in out.iter_mut().zip(a.shares()).zip(&s.values) {
                *o += s.prob * share * v;
            }
        }
        out
    }

    pub fn welfare_report(&self, p: &DiscreteProblem, tol: f64) -> WelfareReport {
        WelfareReport::new(p.kind(), self.expected_values(p), tol)
    }
}

/// Variables `φ_{k,i}` (index `k * n + i`), one simplex row per state and
/// one Fair Share row per agent, on the normalized problem.
pub fn build_fair_lp(p: &DiscreteProblem) -> LinearProgram {
    let q = normalize_problem(p);
    let (n, k) = (q.n(), q.states().len());
    let sense = match q.kind() {
        ObjectKind::Good => Sense::Maximize,
        ObjectKind::Bad => Sense::Minimize,
    };
    let mut objective = vec![0.0; n * k];
    for (s, state) in q.states().iter().enumerate() {
        for i in 0..n {
            objective[s * n + i] = state.prob * state.values[i];
        }
    }
    let mut lp = LinearProgram::new(sense, objective.clone());
    lp.bounds = vec![(0.0, 1.0); n * k];
    for s in 0..k {
        let mut row = vec![0.0; n * k];
        row[s * n..(s + 1) * n].fill(1.0);
        lp.add_eq(row, 1.0);
    }
    let fair = 1.0 / n as f64;
    for i in 0..n {
        let mut row = vec![0.0; n * k];
        for s in 0..k {
            row[s * n + i] = objective[s * n + i];
        }
        match q.kind() {
            ObjectKind::Good => lp.add_ge(row, fair),
            ObjectKind::Bad => lp.add_le(row, fair),
        }
    }
    lp
}

/// Solves the Fair Share constrained program and returns the statewise
/// optimum together with its social value.
pub fn optimal_fair_rule(p: &DiscreteProblem) -> Result<(StatewiseRule, f64)> {
    let n = p.n();
    let lp = build_fair_lp(p);
    // the bounds φ <= 1 are implied by the simplex rows
    let mut relaxed = lp.clone();
    relaxed.bounds = vec![(0.0, f64::INFINITY); lp.n_vars()];
    let sol = simplex_solve(&relaxed, LP_TOL)?;
    let allocations = sol
        .x
        .chunks(n)
        .map(|c| {
            let clamped: Vec<f64> = c.iter().map(|v| v.clamp(0.0, 1.0)).collect();
            let total: f64 = clamped.iter().sum();
            Allocation::from_shares_unchecked(clamped.iter().map(|v| v / total).collect())
        })
        .collect();
    let rule = StatewiseRule { allocations };
    let value = rule.expected_values(p).iter().sum();
    Ok((rule, value))
}

/// `E max_i X*_i` for a good, `E min_i X*_i` for a bad.
pub fn unconstrained_optimum(p: &DiscreteProblem) -> f64 {
    let q = normalize_problem(p);
    q.states()
        .iter()
        .map(|s| {
            let best = match q.kind() {
                ObjectKind::Good => s.values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                ObjectKind::Bad => s.values.iter().copied().fold(f64::INFINITY, f64::min),
            };
            s.prob * best
        })
        .sum()
}

/// Efficiency ratio of a social value against the unconstrained optimum,
/// oriented so that it is at least 1.
pub fn ratio_to_optimum(p: &DiscreteProblem, value: f64) -> Result<f64> {
    let opt = unconstrained_optimum(p);
    let (num, den) = match p.kind() {
        ObjectKind::Good => (opt, value),
        ObjectKind::Bad => (value, opt),
    };
    if den == 0.0 {
        return Err(Error::DegenerateDenominator);
    }
    Ok(num / den)
}

pub fn pi_ratio(p: &DiscreteProblem, rule: RuleId) -> Result<f64> {
    ratio_to_optimum(p, social_value(p, rule)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fairness::FS_TOL;
    use crate::model::State;
    use approx::assert_abs_diff_eq;

    fn example1() -> DiscreteProblem {
        DiscreteProblem::new(
            ObjectKind::Bad,
            vec![
                State::new(0.25, vec![1.0, 5.0]),
                State::new(0.25, vec![5.0, 3.0]),
                State::new(0.5, vec![5.0, 4.0]),
            ],
        )
        .unwrap()
    }

    fn hard_bad_n2() -> DiscreteProblem {
        DiscreteProblem::new(
            ObjectKind::Bad,
            vec![
                State::new(0.5, vec![4.0 / 3.0, 2.0]),
                State::new(0.5, vec![2.0 / 3.0, 0.0]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn lp_shapes() {
        let lp = build_fair_lp(&example1());
        assert_eq!((lp.n_vars(), lp.eq.len(), lp.le.len()), (6, 3, 2));
        let single =
            DiscreteProblem::new(ObjectKind::Good, vec![State::new(1.0, vec![1.0, 1.0])]).unwrap();
        let lp = build_fair_lp(&single);
        assert_eq!((lp.n_vars(), lp.eq.len(), lp.le.len()), (2, 1, 2));
        assert_eq!(lp.sense, Sense::Maximize);
    }

    #[test]
    fn example_one_optimum() {
        let p = example1();
        let (rule, value) = optimal_fair_rule(&p).unwrap();
        assert_abs_diff_eq!(value * 4.0, 3.1875, epsilon = 1e-9);
        let town_c = rule.allocations[2].shares();
        assert_abs_diff_eq!(town_c[0], 3.0 / 8.0, epsilon = 1e-9);
        assert_abs_diff_eq!(town_c[1], 5.0 / 8.0, epsilon = 1e-9);
        let costs = rule.expected_values(&p);
        assert_abs_diff_eq!(costs[0] * 4.0, 19.0 / 16.0, epsilon = 1e-9);
        assert_abs_diff_eq!(costs[1] * 4.0, 2.0, epsilon = 1e-9);
        assert!(rule.welfare_report(&p, FS_TOL).fair());
        let lp_value = simplex_solve(&build_fair_lp(&p), LP_TOL).unwrap().objective;
        assert_abs_diff_eq!(lp_value, value, epsilon = 1e-9);
    }

    #[test]
    fn single_state_good() {
        let p = DiscreteProblem::new(ObjectKind::Good, vec![State::new(1.0, vec![1.0, 1.0])]).unwrap();
        let (rule, value) = optimal_fair_rule(&p).unwrap();
        assert_abs_diff_eq!(value, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rule.allocations[0].shares()[0], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn two_state_bad_instance() {
        let p = hard_bad_n2();
        let (_, value) = optimal_fair_rule(&p).unwrap();
        assert_abs_diff_eq!(value, 0.75, epsilon = 1e-9);
        assert_abs_diff_eq!(unconstrained_optimum(&p), 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn unconstrained_examples() {
        assert_abs_diff_eq!(unconstrained_optimum(&example1()), 0.75, epsilon = 1e-12);
        let p = DiscreteProblem::new(ObjectKind::Good, vec![State::new(1.0, vec![2.0, 1.0])]).unwrap();
        // normalization maps (2, 1) to (1, 1)
        assert_abs_diff_eq!(unconstrained_optimum(&p), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn pi_examples() {
        let p = example1();
        assert_abs_diff_eq!(
            pi_ratio(&p, RuleId::BottomHeavy).unwrap(),
            157.0 / 144.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(pi_ratio(&p, RuleId::Utilitarian).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            pi_ratio(&p, RuleId::Proportional).unwrap(),
            515.0 / 432.0,
            epsilon = 1e-12
        );
    }
}
