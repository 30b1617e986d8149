//! The Top-Heavy family on a few profiles of a good, and its Fair Share
//! guarantee on a random prior.

use fairsplit::fairness::{verify_fair_share, FS_TOL};
use fairsplit::rules::top_heavy;
use fairsplit::{DiscreteProblem, ObjectKind, RuleId, State, Theta, ValueProfile};

fn main() -> fairsplit::Result<()> {
    let profiles = [vec![1.0, 3.0], vec![0.75, 0.75, 1.5], vec![0.2, 0.9, 1.0, 1.9]];
    for x in profiles {
        let x = ValueProfile::new(x)?;
        for t in [0.25, 0.5, 1.0] {
            let a = top_heavy(&x, Theta::new(t)?);
            println!("x = {:?}  θ = {t}: shares {:.4?}  welfare {:.4}", x.values(), a.shares(), a.welfare(&x));
        }
    }

    let p = DiscreteProblem::new(
        ObjectKind::Good,
        vec![
            State::new(0.5, vec![4.0, 1.0, 0.0]),
            State::new(0.3, vec![0.0, 2.0, 5.0]),
            State::new(0.2, vec![1.0, 3.0, 1.0]),
        ],
    )?;
    let r = verify_fair_share(&p, RuleId::TopHeavy(Theta::ONE), FS_TOL)?;
    println!("expected normalized utilities {:.4?}, fair share holds: {}", r.per_agent, r.fair());
    Ok(())
}
