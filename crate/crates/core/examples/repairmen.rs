//! Two towns share one repairman whose travel costs depend on a random
//! weather state. Compares the prior-free rules with the LP optimum.

use fairsplit::fairness::agent_expected_values;
use fairsplit::opt::optimal_fair_rule;
use fairsplit::{DiscreteProblem, ObjectKind, RuleId, State};

fn main() -> fairsplit::Result<()> {
    let p = DiscreteProblem::new(
        ObjectKind::Bad,
        vec![
            State::new(0.25, vec![1.0, 5.0]),
            State::new(0.25, vec![5.0, 3.0]),
            State::new(0.5, vec![5.0, 4.0]),
        ],
    )?;
    let mean = p.common_mean().expect("both towns expect a cost of 4");
    let (opt, value) = optimal_fair_rule(&p)?;
    let best = value * mean;
    println!("optimal fair rule: total cost {best:.4}");
    for (k, a) in opt.allocations.iter().enumerate() {
        println!("  state {}: shares {:?}", k + 1, a.shares());
    }
    for rule in [RuleId::Utilitarian, RuleId::Proportional, RuleId::BottomHeavy, RuleId::EqualSplit] {
        let costs: Vec<f64> = agent_expected_values(&p, rule)?.iter().map(|v| v * mean).collect();
        let total: f64 = costs.iter().sum();
        println!(
            "{:>4}: costs ({:.4}, {:.4}) total {total:.4} = {:.1}% of the fair optimum",
            rule.to_string(),
            costs[0],
            costs[1],
            100.0 * total / best
        );
    }
    Ok(())
}
