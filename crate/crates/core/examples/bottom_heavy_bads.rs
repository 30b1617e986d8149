//! Bottom-Heavy prefix filling for a bad, the θ-family between Equal Split
//! and Bottom-Heavy, and the two-agent worst case.

use fairsplit::rules::{bottom_heavy, bottom_heavy_theta};
use fairsplit::worstcase::bottom_heavy_two_agent_exact;
use fairsplit::ValueProfile;

fn main() -> fairsplit::Result<()> {
    let x = ValueProfile::new(vec![1.25, 0.75])?;
    println!("BH on {:?}: {:.6?}", x.values(), bottom_heavy(&x).shares());

    let y = ValueProfile::new(vec![0.3, 0.5, 1.0, 2.2])?;
    for t in [0.0, 0.25, 0.5, 1.0] {
        let a = bottom_heavy_theta(&y, t)?;
        println!("θ = {t}: shares {:.4?}  cost {:.4}", a.shares(), a.welfare(&y));
    }
    println!("full BH:  shares {:.4?}", bottom_heavy(&y).shares());

    let r = bottom_heavy_two_agent_exact();
    println!("two-agent competitive ratio {} at {:?}", r.value, r.witness_profile().map(|w| w.values()));
    Ok(())
}
