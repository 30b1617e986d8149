//! Ex-post comparison of rules on a deterministic probe set.

use fairsplit::fairness::{dominates, ProbePlan};
use fairsplit::{ObjectKind, RuleId, Theta};

fn main() -> fairsplit::Result<()> {
    let plan = ProbePlan::default();
    let pairs = [
        (RuleId::BottomHeavy, RuleId::Proportional, ObjectKind::Bad, 4),
        (RuleId::TopHeavy(Theta::ONE), RuleId::TopHeavy(Theta::new(0.5)?), ObjectKind::Good, 2),
        (RuleId::TopHeavy(Theta::new(0.5)?), RuleId::TopHeavy(Theta::ONE), ObjectKind::Good, 3),
        (RuleId::TopHeavy(Theta::new(0.75)?), RuleId::Proportional, ObjectKind::Good, 4),
    ];
    for (a, b, kind, n) in pairs {
        let v = dominates(a, b, kind, n, &plan)?;
        println!("{a} vs {b} ({kind}, n = {n}): {v:?}");
    }
    Ok(())
}
