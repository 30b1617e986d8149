//! Builds and solves the Fair Share constrained linear program for a hard
//! instance of a good and compares it with the unconstrained optimum.

use fairsplit::opt::{build_fair_lp, optimal_fair_rule, unconstrained_optimum};
use fairsplit::worstcase::hard_instance_good;

fn main() -> fairsplit::Result<()> {
    for (n, m) in [(4, 2), (9, 3), (16, 4)] {
        let p = hard_instance_good(n, m)?;
        let lp = build_fair_lp(&p);
        let (_, fair) = optimal_fair_rule(&p)?;
        let best = unconstrained_optimum(&p);
        println!(
            "n = {n:2}, m = {m}: {} variables, {} rows; fair optimum {fair:.4}, unconstrained {best:.4}, price of fairness {:.4}",
            lp.n_vars(),
            lp.eq.len() + lp.le.len(),
            best / fair
        );
    }
    Ok(())
}
