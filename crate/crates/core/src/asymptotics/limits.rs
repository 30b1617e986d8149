//! Leading-order efficiency formulas for i.i.d. priors.

use std::fmt;

use serde::Serialize;

use super::distribution::{Distribution1D, Family};
use super::quadrature::{integrate_with_breaks, QUAD_TOL};
use crate::error::{Error, Result};
use crate::model::{ObjectKind, ValueProfile};
use crate::rules::{allocate, RuleId, Theta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Extreme {
    Max,
    Min,
}

/// Number of agents; `Infinite` asks for the `n → ∞` limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Population {
    Finite(usize),
    Infinite,
}

impl From<usize> for Population {
    fn from(n: usize) -> Self {
        Population::Finite(n)
    }
}

impl fmt::Display for Population {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Population::Finite(n) => write!(f, "{n}"),
            Population::Infinite => f.write_str("inf"),
        }
    }
}

/// `E max_i X_i` or `E min_i X_i` over `n` i.i.d. draws.
pub fn expected_extreme(d: &Distribution1D, n: impl Into<Population>, which: Extreme) -> Result<f64> {
    let (lo, hi) = d.support();
    let n = match n.into() {
        Population::Infinite => {
            return Ok(match which {
                Extreme::Max => hi,
                Extreme::Min => lo,
            })
        }
        Population::Finite(0) => return Err(Error::InvalidArgument("n must be at least 1".into())),
        Population::Finite(n) => n,
    };
    let pow = |p: f64| p.max(0.0).powf(n as f64);
    if let Family::Atoms(atoms) = d.family() {
        // the extreme equals l_j with probability F(l_j)^n - F(l_j-)^n (max)
        let mut out = 0.0;
        let mut below = 0.0;
        for &(l, m) in atoms {
            let upto = (below + m).min(1.0);
            out += l * match which {
                Extreme::Max => pow(upto) - pow(below),
                Extreme::Min => pow(1.0 - below) - pow(1.0 - upto),
            };
            below = upto;
        }
        return Ok(out);
    }
    let tail = match which {
        Extreme::Max => integrate_with_breaks(|t| 1.0 - pow(d.cdf(t)), lo, hi, &[], QUAD_TOL)?,
        Extreme::Min => integrate_with_breaks(|t| pow(1.0 - d.cdf(t)), lo, hi, &[], QUAD_TOL)?,
    };
    Ok(lo + tail)
}

/// Top-Heavy efficiency ratio for a good, leading order:
/// `1 / (1 - E(1+θ-θ/X)₊ + E(X(1+θ)-θ)₊ / E max)`.
pub fn pi_th_limit_good(d: &Distribution1D, theta: Theta, n: impl Into<Population>) -> Result<f64> {
    let t = theta.value();
    let kink = t / (1.0 + t);
    let a = d.expect(|x| (1.0 + t - t / x).max(0.0), &[kink])?;
    let b = d.expect(|x| (x * (1.0 + t) - t).max(0.0), &[kink])?;
    let emax = expected_extreme(d, n, Extreme::Max)?;
    let last = if emax.is_infinite() { 0.0 } else { b / emax };
    Ok(1.0 / (1.0 - a + last))
}

/// Proportional rule for a good, leading order: `E max / E X²`.
pub fn pi_pro_limit_good(d: &Distribution1D, n: impl Into<Population>) -> Result<f64> {
    let emax = expected_extreme(d, n, Extreme::Max)?;
    Ok(emax / d.expect(|x| x * x, &[])?)
}

/// Threshold `T` and tie weight `γ` of the Bottom-Heavy limit, with
/// `P(X < T) + γ P(X = T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BhThreshold {
    pub t: f64,
    pub gamma: f64,
    pub mass_below: f64,
}

const T_TOL: f64 = 1e-10;

/// Solves `E(1{X<T}/X) + γ P(X=T)/T = 1`.
pub fn bh_threshold(d: &Distribution1D) -> Result<BhThreshold> {
    if !d.harmonic_moment_finite() {
        // the left side is already infinite for every T > 0
        return Err(Error::NoFiniteT);
    }
    if let Family::Atoms(atoms) = d.family() {
        let mut g = 0.0;
        let mut below = 0.0;
        for &(l, m) in atoms {
            let gamma = (1.0 - g) * l / m;
            if gamma < 1.0 - 1e-12 {
                let gamma = gamma.max(0.0);
                return Ok(BhThreshold {
                    t: l,
                    gamma,
                    mass_below: below + gamma * m,
                });
            }
            g += m / l;
            below += m;
        }
        return Ok(BhThreshold {
            t: f64::INFINITY,
            gamma: 0.0,
            mass_below: 1.0,
        });
    }
    let (lo, hi) = d.support();
    let g = |t: f64| d.expect_range(|x| 1.0 / x, lo, t, &[]);
    let mut b = if hi.is_finite() { hi } else { lo.max(1.0) };
    while g(b)? < 1.0 {
        if hi.is_finite() {
            return Err(Error::NoFiniteT);
        }
        b *= 2.0;
    }
    let mut a = lo;
    while b - a > T_TOL {
        let m = 0.5 * (a + b);
        if g(m)? < 1.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let t = 0.5 * (a + b);
    Ok(BhThreshold {
        t,
        gamma: 0.0,
        mass_below: d.cdf_left(t),
    })
}

/// Bottom-Heavy rule for a bad, leading order:
/// `(P(X<T) + γ P(X=T)) / E min`.
pub fn pi_bh_limit_bad(d: &Distribution1D, n: impl Into<Population>) -> Result<f64> {
    let th = bh_threshold(d)?;
    let emin = expected_extreme(d, n, Extreme::Min)?;
    Ok(th.mass_below / emin)
}

/// Proportional rule for a bad, leading order: `1 / (E min · E(1/X))`.
pub fn pi_pro_limit_bad(d: &Distribution1D, n: impl Into<Population>) -> Result<f64> {
    let h = d.harmonic_moment()?;
    let emin = expected_extreme(d, n, Extreme::Min)?;
    Ok(1.0 / (emin * h))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma2Bounds {
    /// Mean absolute deviation `E|X - 1|`.
    pub deviation: f64,
    pub lower: f64,
    pub upper: f64,
    /// The lower bound is only claimed for unbounded support.
    pub lower_applies: bool,
}

/// `(1/D, 2/D + 4/D²)` with `D = E|X - 1|`.
pub fn lemma2_bounds(d: &Distribution1D) -> Result<Lemma2Bounds> {
    let dev = d.expect(|x| (x - 1.0).abs(), &[1.0])?;
    if dev < 1e-12 {
        return Err(Error::ZeroDeviation);
    }
    Ok(Lemma2Bounds {
        deviation: dev,
        lower: 1.0 / dev,
        upper: 2.0 / dev + 4.0 / (dev * dev),
        lower_applies: d.support().1.is_infinite(),
    })
}

/// Exact efficiency ratio of `rule` with two i.i.d. agents, by nested
/// quadrature of the social value.
pub fn pi_two_agent_exact(d: &Distribution1D, rule: RuleId, kind: ObjectKind) -> Result<f64> {
    rule.check_kind(kind)?;
    let welfare = |x: f64, y: f64| -> f64 {
        let p = ValueProfile::new(vec![x, y]).expect("nonnegative");
        allocate(rule, &p, kind).expect("kind checked").welfare(&p)
    };
    let s = if let Family::Atoms(atoms) = d.family() {
        let mut s = 0.0;
        for &(x, mx) in atoms {
            for &(y, my) in atoms {
                s += mx * my * welfare(x, y);
            }
        }
        s
    } else {
        let theta = match rule {
            RuleId::TopHeavy(t) => t.value(),
            _ => 1.0,
        };
        let ratios = [theta / (1.0 + theta), 0.5, 1.0, 2.0, (1.0 + theta) / theta];
        let failed = std::cell::Cell::new(None);
        let outer = |x: f64| -> f64 {
            let breaks: Vec<f64> = ratios.iter().map(|r| r * x).collect();
            match d.expect(|y| welfare(x, y), &breaks) {
                Ok(v) => v,
                Err(e) => {
                    failed.set(Some(e));
                    0.0
                }
            }
        };
        let s = d.expect(outer, &[])?;
        if let Some(e) = failed.take() {
            return Err(e);
        }
        s
    };
    let ext = match kind {
        ObjectKind::Good => expected_extreme(d, 2, Extreme::Max)?,
        ObjectKind::Bad => expected_extreme(d, 2, Extreme::Min)?,
    };
    let (num, den) = match kind {
        ObjectKind::Good => (ext, s),
        ObjectKind::Bad => (s, ext),
    };
    if den == 0.0 {
        return Err(Error::DegenerateDenominator);
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::special::exp_integral_ei;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{E, LN_2, PI};

    fn uni(a: f64, b: f64) -> Distribution1D {
        Distribution1D::uniform(a, b).unwrap()
    }

    #[test]
    fn extremes() {
        let u = uni(0.0, 1.0);
        assert_abs_diff_eq!(expected_extreme(&u, 1, Extreme::Max).unwrap(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(expected_extreme(&u, 99, Extreme::Max).unwrap(), 1.98, epsilon = 1e-8);
        assert_abs_diff_eq!(expected_extreme(&u, 99, Extreme::Min).unwrap(), 0.02, epsilon = 1e-8);
        let e = Distribution1D::exponential();
        assert_abs_diff_eq!(expected_extreme(&e, 2, Extreme::Max).unwrap(), 1.5, epsilon = 1e-8);
        assert_abs_diff_eq!(expected_extreme(&e, 5, Extreme::Min).unwrap(), 0.2, epsilon = 1e-8);
        // harmonic numbers
        let h: f64 = (1..=50).map(|k| 1.0 / k as f64).sum();
        assert_abs_diff_eq!(expected_extreme(&e, 50, Extreme::Max).unwrap(), h, epsilon = 1e-8);
        assert_eq!(expected_extreme(&e, Population::Infinite, Extreme::Max).unwrap(), f64::INFINITY);
        assert!(expected_extreme(&u, 0, Extreme::Max).is_err());
    }

    #[test]
    fn extremes_of_atoms() {
        let a = Distribution1D::atoms(&[(0.5, 0.0), (0.5, 1.0)]).unwrap();
        // locations become 0 and 2
        assert_abs_diff_eq!(expected_extreme(&a, 3, Extreme::Max).unwrap(), 2.0 * 7.0 / 8.0, epsilon = 1e-15);
        assert_abs_diff_eq!(expected_extreme(&a, 3, Extreme::Min).unwrap(), 2.0 / 8.0, epsilon = 1e-15);
    }

    #[test]
    fn th_limits() {
        let one = Theta::ONE;
        let v = pi_th_limit_good(&uni(0.0, 1.0), one, Population::Infinite).unwrap();
        assert_abs_diff_eq!(v, 1.0 / (1.0 / 16.0 + LN_2), epsilon = 1e-8);
        let v = pi_th_limit_good(&Distribution1D::exponential(), one, Population::Infinite).unwrap();
        let closed = 1.0 / (1.0 - 2.0 * (-0.5f64).exp() - exp_integral_ei(-0.5).unwrap());
        assert_abs_diff_eq!(v, closed, epsilon = 1e-8);
        assert_abs_diff_eq!(v, 2.884, epsilon = 1e-3);
    }

    #[test]
    fn th_internal_expectations() {
        let u = uni(0.0, 1.0);
        let a = u.expect(|x| (2.0 - 1.0 / x).max(0.0), &[0.5]).unwrap();
        let b = u.expect(|x| (2.0 * x - 1.0).max(0.0), &[0.5]).unwrap();
        assert_abs_diff_eq!(a, 1.5 - LN_2, epsilon = 1e-9);
        assert_abs_diff_eq!(b, 9.0 / 8.0, epsilon = 1e-9);
    }

    #[test]
    fn two_agent_values() {
        let u = uni(0.0, 1.0);
        let th = pi_two_agent_exact(&u, RuleId::TopHeavy(Theta::ONE), ObjectKind::Good).unwrap();
        assert_abs_diff_eq!(th, 8.0 / (5.0 + 4.0 * LN_2), epsilon = 1e-7);
        let es = pi_two_agent_exact(&u, RuleId::EqualSplit, ObjectKind::Good).unwrap();
        assert_abs_diff_eq!(es, 4.0 / 3.0, epsilon = 1e-8);
        // E max / E[(x² + y²)/(x + y)] on the unit square, in closed form
        let pro = pi_two_agent_exact(&u, RuleId::Proportional, ObjectKind::Good).unwrap();
        let square = 2.0 / 3.0 * (4.0 * LN_2 - 1.0) / 2.0;
        assert_abs_diff_eq!(pro, (2.0 / 3.0) / square, epsilon = 1e-7);
    }

    #[test]
    fn pro_limits() {
        assert_abs_diff_eq!(pi_pro_limit_good(&uni(0.0, 1.0), Population::Infinite).unwrap(), 1.5, epsilon = 1e-9);
        let e = Distribution1D::exponential();
        let n = 10_000;
        let v = pi_pro_limit_good(&e, n).unwrap();
        assert!((v / ((n as f64).ln() / 2.0) - 1.0).abs() < 0.15);
        assert_abs_diff_eq!(pi_pro_limit_good(&Distribution1D::point_mass(), 7).unwrap(), 1.0, epsilon = 1e-12);
        let w = uni(0.5, 1.5);
        assert_abs_diff_eq!(pi_pro_limit_bad(&w, Population::Infinite).unwrap(), 2.0 / 3f64.ln(), epsilon = 1e-8);
        assert_abs_diff_eq!(pi_pro_limit_bad(&Distribution1D::point_mass(), 3).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(pi_pro_limit_bad(&e, 3), Err(Error::HarmonicMomentInfinite));
    }

    #[test]
    fn bh_limits() {
        let w = uni(0.5, 1.5);
        let th = bh_threshold(&w).unwrap();
        assert_abs_diff_eq!(th.t, E / 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(th.mass_below, (E - 1.0) / 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(pi_bh_limit_bad(&w, Population::Infinite).unwrap(), E - 1.0, epsilon = 1e-8);

        let p = Distribution1D::poly32();
        let th = bh_threshold(&p).unwrap();
        assert_abs_diff_eq!(th.t, 2.0 - 2.0 / 3f64.sqrt(), epsilon = 1e-9);
        assert_abs_diff_eq!(th.mass_below, 0.385, epsilon = 1e-3);
        let n = 1_000_000;
        let emin = expected_extreme(&p, n, Extreme::Min).unwrap();
        assert!((emin / (PI / (3.0 * n as f64)).sqrt() - 1.0).abs() < 0.01);

        let pm = Distribution1D::point_mass();
        let th = bh_threshold(&pm).unwrap();
        assert!(th.t > 1.0);
        assert_abs_diff_eq!(pi_bh_limit_bad(&pm, 5).unwrap(), 1.0, epsilon = 1e-12);

        assert_eq!(bh_threshold(&Distribution1D::exponential()), Err(Error::NoFiniteT));
    }

    #[test]
    fn bh_atom_at_threshold() {
        let d = Distribution1D::atoms(&[(0.25, 0.5), (0.75, 7.0 / 6.0)]).unwrap();
        let th = bh_threshold(&d).unwrap();
        assert_eq!(th.t, 7.0 / 6.0);
        assert_abs_diff_eq!(th.gamma, 7.0 / 9.0, epsilon = 1e-12);
        assert_abs_diff_eq!(th.mass_below, 0.25 + 0.75 * 7.0 / 9.0, epsilon = 1e-12);
        // a jump of exactly 1 is passed over
        let d = Distribution1D::atoms(&[(0.5, 0.5), (0.5, 1.5)]).unwrap();
        let th = bh_threshold(&d).unwrap();
        assert_eq!((th.t, th.gamma), (1.5, 0.0));
        assert_abs_diff_eq!(th.mass_below, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn lemma_two() {
        let b = lemma2_bounds(&Distribution1D::exponential()).unwrap();
        assert_abs_diff_eq!(b.deviation, 2.0 / E, epsilon = 1e-8);
        assert!(b.lower_applies);
        assert_abs_diff_eq!(b.lower, E / 2.0, epsilon = 1e-8);
        assert_abs_diff_eq!(b.upper, E + E * E, epsilon = 1e-7);
        let b = lemma2_bounds(&uni(0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(b.deviation, 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(b.upper, 20.0, epsilon = 1e-7);
        assert!(!b.lower_applies);
        assert_eq!(lemma2_bounds(&Distribution1D::point_mass()), Err(Error::ZeroDeviation));
    }
}
