//! Worst-case efficiency ratios: closed forms next to the numerical search.

use fairsplit::worstcase::{cr_closed_form, cr_search};
use fairsplit::{ObjectKind, RuleId, Theta};

fn main() -> fairsplit::Result<()> {
    let rules = [
        (RuleId::TopHeavy(Theta::ONE), ObjectKind::Good),
        (RuleId::TopHeavy(Theta::new(0.5)?), ObjectKind::Good),
        (RuleId::Proportional, ObjectKind::Good),
        (RuleId::BottomHeavy, ObjectKind::Bad),
    ];
    for (rule, kind) in rules {
        for n in 2..=5 {
            let search = cr_search(rule, n, kind, 300, 1)?;
            let closed = cr_closed_form(rule, n, kind)?;
            let closed = closed.map_or("-".to_string(), |c| match c.bounds {
                Some((lo, hi)) => format!("[{lo:.4}, {hi:.4}]"),
                None => format!("{:.6}", c.value),
            });
            println!("{:>5} {kind} n = {n}: search {:.6}  closed form {closed}", rule.to_string(), search.value);
        }
    }
    Ok(())
}
