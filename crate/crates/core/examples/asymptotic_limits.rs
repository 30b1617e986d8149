//! Efficiency under i.i.d. priors: limit formulas, a Monte Carlo check and
//! a growth-law fit.

use fairsplit::asymptotics::{
    growth_check, monte_carlo_pi, pi_bh_limit_bad, pi_pro_limit_bad, pi_th_limit_good,
    Distribution1D, GrowthModel, Population,
};
use fairsplit::{ObjectKind, RuleId, Theta};

fn main() -> fairsplit::Result<()> {
    let uni: Distribution1D = "uniform:0,1".parse()?;
    let mid: Distribution1D = "uniform:0.5,1.5".parse()?;
    let exp: Distribution1D = "exp".parse()?;
    let inf = Population::Infinite;
    println!("TH(1), uniform:     {:.4}", pi_th_limit_good(&uni, Theta::ONE, inf)?);
    println!("TH(1), exponential: {:.4}", pi_th_limit_good(&exp, Theta::ONE, inf)?);
    println!("BH, uniform[½,3/2]: {:.4}", pi_bh_limit_bad(&mid, inf)?);
    println!("PRO, uniform[½,3/2]: {:.4}", pi_pro_limit_bad(&mid, inf)?);

    let est = monte_carlo_pi(&uni, RuleId::TopHeavy(Theta::ONE), ObjectKind::Good, 100, 50_000, 7)?;
    println!("simulated TH(1), n = 100: {:.4} ± {:.4}", est.mean, est.std_error);

    let poly = Distribution1D::poly32();
    let fit = growth_check(&poly, RuleId::BottomHeavy, ObjectKind::Bad, &[16, 64, 256], GrowthModel::SqrtN, 1 << 21, 7)?;
    println!(
        "BH on ¾x(2−x): π ≈ {:.3}·√n (slope {:.3}, R² {:.4}, consistent: {})",
        fit.coefficient, fit.slope, fit.r_squared, fit.consistent
    );
    Ok(())
}
