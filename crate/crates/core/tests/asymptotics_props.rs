use approx::assert_abs_diff_eq;
use fairsplit::asymptotics::quadrature::integrate;
use fairsplit::asymptotics::{
    expected_extreme, lemma2_bounds, monte_carlo_pi, pi_bh_limit_bad, pi_pro_limit_bad,
    pi_pro_limit_good, pi_th_limit_good, pi_two_agent_exact, Distribution1D, Extreme, Family,
    Population,
};
use fairsplit::{ObjectKind, RuleId, Theta};
use proptest::prelude::*;

fn builtins() -> Vec<Distribution1D> {
    vec![
        Distribution1D::uniform(0.0, 1.0).unwrap(),
        Distribution1D::uniform(0.5, 1.5).unwrap(),
        Distribution1D::exponential(),
        Distribution1D::poly32(),
        Distribution1D::power_law(0.5).unwrap(),
        Distribution1D::atoms(&[(0.5, 0.0), (0.5, 2.0)]).unwrap(),
    ]
}

fn any_distribution() -> impl Strategy<Value = Distribution1D> {
    prop_oneof![
        (0.0..5.0f64, 0.01..5.0f64).prop_map(|(a, w)| Distribution1D::uniform(a, a + w).unwrap()),
        Just(Distribution1D::exponential()),
        Just(Distribution1D::poly32()),
        (0.05..0.95f64).prop_map(|a| Distribution1D::power_law(a).unwrap()),
        prop::collection::vec((0.05..1.0f64, 0.0..10.0f64), 1..5).prop_filter_map("zero mean", |v| {
            let total: f64 = v.iter().map(|p| p.0).sum();
            let pairs: Vec<(f64, f64)> = v.iter().map(|&(m, l)| (m / total, l)).collect();
            Distribution1D::atoms(&pairs).ok()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructor_normalizes_mean(d in any_distribution()) {
        let m = d.expect(|x| x, &[]).unwrap();
        prop_assert!((m - 1.0).abs() <= 1e-9, "{d}: mean {m}");
    }

    #[test]
    fn density_and_atoms_carry_unit_mass(d in any_distribution()) {
        let atoms: f64 = d.atom_list().iter().map(|a| a.1).sum();
        let (lo, hi) = d.support();
        let continuous = match d.family() {
            Family::Atoms(_) => 0.0,
            Family::PowerLaw { .. } => d.cdf(hi) - d.cdf(lo),
            _ => integrate(|x| d.pdf(x).unwrap(), lo, hi, 1e-10).unwrap(),
        };
        prop_assert!((continuous + atoms - 1.0).abs() <= 1e-8);
        let top = if hi.is_finite() { hi } else { 50.0 };
        let mut prev = 0.0;
        for k in 0..=200 {
            let c = d.cdf(lo + (top - lo) * k as f64 / 200.0);
            prop_assert!(c + 1e-15 >= prev);
            prev = c;
        }
        prop_assert!((d.cdf(top) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn extremes_bracket_the_mean(d in any_distribution(), n in 1usize..50) {
        let lo = expected_extreme(&d, n, Extreme::Min).unwrap();
        let hi = expected_extreme(&d, n, Extreme::Max).unwrap();
        prop_assert!(lo <= 1.0 + 1e-8 && hi >= 1.0 - 1e-8);
        let hi2 = expected_extreme(&d, n + 1, Extreme::Max).unwrap();
        prop_assert!(hi2 + 1e-8 >= hi);
    }

    #[test]
    fn fair_rules_never_beat_the_optimum(
        d in any_distribution(),
        n in 2usize..12,
        which in 0usize..4,
        seed in 0u64..1000,
    ) {
        let (rule, kind) = [
            (RuleId::TopHeavy(Theta::ONE), ObjectKind::Good),
            (RuleId::Proportional, ObjectKind::Good),
            (RuleId::BottomHeavy, ObjectKind::Bad),
            (RuleId::EqualSplit, ObjectKind::Bad),
        ][which];
        let est = monte_carlo_pi(&d, rule, kind, n, 2000, seed).unwrap();
        prop_assert!(est.std_error >= 0.0);
        prop_assert!(est.mean >= 1.0 - 3.0 * est.std_error - 1e-12, "{d} {rule}: {est:?}");
    }
}

#[test]
fn extremes_against_sampling() {
    for d in builtins() {
        for n in [2, 5, 20] {
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(n as u64);
            let trials = 40_000;
            let (mut smax, mut smin) = (0.0, 0.0);
            for _ in 0..trials {
                let xs: Vec<f64> = (0..n).map(|_| d.sample(&mut rng)).collect();
                smax += xs.iter().copied().fold(f64::MIN, f64::max);
                smin += xs.iter().copied().fold(f64::MAX, f64::min);
            }
            let emax = expected_extreme(&d, n, Extreme::Max).unwrap();
            let emin = expected_extreme(&d, n, Extreme::Min).unwrap();
            assert!((smax / trials as f64 - emax).abs() < 0.03 * emax.max(1.0), "{d} n={n}");
            assert!((smin / trials as f64 - emin).abs() < 0.03, "{d} n={n}");
        }
    }
}

#[test]
fn lemma_two_sandwich_for_builtins() {
    for d in builtins() {
        let b = lemma2_bounds(&d).unwrap();
        let v = pi_th_limit_good(&d, Theta::ONE, Population::Infinite).unwrap();
        assert!(v <= b.upper, "{d}: {v} > {}", b.upper);
        if b.lower_applies {
            assert!(v >= b.lower, "{d}: {v} < {}", b.lower);
        }
    }
}

#[test]
fn top_heavy_limit_agrees_with_simulation_on_uniform() {
    let d = Distribution1D::uniform(0.0, 1.0).unwrap();
    let est = monte_carlo_pi(&d, RuleId::TopHeavy(Theta::ONE), ObjectKind::Good, 200, 100_000, 3).unwrap();
    let limit = pi_th_limit_good(&d, Theta::ONE, Population::Infinite).unwrap();
    assert!((est.mean - limit).abs() <= 3.0 * (est.std_error + 0.05 * limit), "{est:?} vs {limit}");
}

#[test]
fn exponential_limit_is_approached_only_logarithmically() {
    let d = Distribution1D::exponential();
    let rule = RuleId::TopHeavy(Theta::ONE);
    let est = monte_carlo_pi(&d, rule, ObjectKind::Good, 200, 100_000, 3).unwrap();
    let limit = pi_th_limit_good(&d, Theta::ONE, Population::Infinite).unwrap();
    // the n = ∞ value is far away at n = 200 ...
    assert!((est.mean - limit).abs() > 3.0 * (est.std_error + 0.05 * limit));
    // ... while the same formula with the finite-n maximum tracks the simulation
    let at_n = pi_th_limit_good(&d, Theta::ONE, 200).unwrap();
    assert!((est.mean - at_n).abs() < 0.01 * at_n, "{est:?} vs {at_n}");
}

#[test]
fn bottom_heavy_limit_agrees_with_simulation() {
    let d = Distribution1D::uniform(0.5, 1.5).unwrap();
    let est = monte_carlo_pi(&d, RuleId::BottomHeavy, ObjectKind::Bad, 200, 100_000, 5).unwrap();
    let limit = pi_bh_limit_bad(&d, Population::Infinite).unwrap();
    assert_abs_diff_eq!(limit, std::f64::consts::E - 1.0, epsilon = 1e-8);
    assert!((est.mean - limit).abs() <= 3.0 * (est.std_error + 0.05 * limit), "{est:?} vs {limit}");
    let est = monte_carlo_pi(&d, RuleId::Proportional, ObjectKind::Bad, 200, 100_000, 5).unwrap();
    let limit = pi_pro_limit_bad(&d, Population::Infinite).unwrap();
    assert!((est.mean - limit).abs() <= 3.0 * (est.std_error + 0.05 * limit), "{est:?} vs {limit}");
}

#[test]
fn two_agent_quadrature_against_simulation() {
    for d in [Distribution1D::uniform(0.0, 1.0).unwrap(), Distribution1D::exponential(), Distribution1D::poly32()] {
        for (rule, kind) in [
            (RuleId::TopHeavy(Theta::ONE), ObjectKind::Good),
            (RuleId::TopHeavy(Theta::new(0.5).unwrap()), ObjectKind::Good),
            (RuleId::Proportional, ObjectKind::Good),
            (RuleId::BottomHeavy, ObjectKind::Bad),
        ] {
            let exact = pi_two_agent_exact(&d, rule, kind).unwrap();
            let est = monte_carlo_pi(&d, rule, kind, 2, 400_000, 9).unwrap();
            assert!((est.mean - exact).abs() < 4.0 * est.std_error + 1e-4, "{d} {rule}: {exact} vs {est:?}");
        }
    }
}

#[test]
fn two_agent_uniform_values() {
    let d = Distribution1D::uniform(0.0, 1.0).unwrap();
    let th = pi_two_agent_exact(&d, RuleId::TopHeavy(Theta::ONE), ObjectKind::Good).unwrap();
    assert_abs_diff_eq!(th, 8.0 / (5.0 + 4.0 * std::f64::consts::LN_2), epsilon = 1e-7);
    // the leading-order formula is not exact at n = 2
    let lead = pi_th_limit_good(&d, Theta::ONE, 2).unwrap();
    assert!((lead - th).abs() > 0.05);
    let pro = pi_two_agent_exact(&d, RuleId::Proportional, ObjectKind::Good).unwrap();
    assert_abs_diff_eq!(pro, 1.12829, epsilon = 1e-5);
}

#[test]
fn poly32_rules_differ_by_sqrt_three() {
    let d = Distribution1D::poly32();
    for n in [100, 10_000] {
        let bh = pi_bh_limit_bad(&d, n).unwrap();
        let pro = pi_pro_limit_bad(&d, n).unwrap();
        assert_abs_diff_eq!(pro / bh, 3f64.sqrt(), epsilon = 2e-3);
    }
    let n = 1_000_000;
    let coef = pi_bh_limit_bad(&d, n).unwrap() / (n as f64).sqrt();
    assert_abs_diff_eq!(coef, 2.0 / (3.0 * std::f64::consts::PI.sqrt()), epsilon = 2e-3);
}

#[test]
fn exponential_proportional_grows_like_half_log() {
    let d = Distribution1D::exponential();
    for n in [1_000, 10_000, 100_000] {
        let v = pi_pro_limit_good(&d, n).unwrap();
        assert!((v / ((n as f64).ln() / 2.0) - 1.0).abs() < 0.15, "n={n}: {v}");
    }
}

#[test]
fn seeded_estimates_are_reproducible() {
    let d = Distribution1D::poly32();
    let a = monte_carlo_pi(&d, RuleId::BottomHeavy, ObjectKind::Bad, 30, 10_000, 77).unwrap();
    let b = monte_carlo_pi(&d, RuleId::BottomHeavy, ObjectKind::Bad, 30, 10_000, 77).unwrap();
    assert_eq!(a, b);
    let c = monte_carlo_pi(&d, RuleId::BottomHeavy, ObjectKind::Bad, 30, 10_000, 78).unwrap();
    assert_ne!(a.mean, c.mean);
}
