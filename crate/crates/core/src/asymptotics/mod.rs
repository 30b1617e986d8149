//! Efficiency of fair rules when values are i.i.d. across agents.

pub mod distribution;
pub mod growth;
pub mod limits;
pub mod montecarlo;
pub mod quadrature;
pub mod special;

pub use distribution::{Distribution1D, Family};
pub use growth::{growth_check, GrowthModel, GrowthPoint, GrowthReport};
pub use limits::{
    bh_threshold, expected_extreme, lemma2_bounds, pi_bh_limit_bad, pi_pro_limit_bad,
    pi_pro_limit_good, pi_th_limit_good, pi_two_agent_exact, BhThreshold, Extreme, Lemma2Bounds,
    Population,
};
pub use montecarlo::{monte_carlo_pi, MCEstimate};
pub use special::exp_integral_ei;
