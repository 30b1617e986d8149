//! Unit-mean marginals for i.i.d. priors.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use super::quadrature::{integrate_with_breaks, QUAD_TOL};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Family {
    /// Uniform on `[lo, hi]` with `lo + hi = 2`.
    Uniform { lo: f64, hi: f64 },
    /// Rate 1.
    Exponential,
    /// Density `3/4 x (2 - x)` on `[0, 2]`.
    Poly32,
    /// CDF `(x/scale)^(1-alpha)` on `[0, scale]`, i.e. density proportional
    /// to `x^(-alpha)`; `scale = (2-alpha)/(1-alpha)`.
    PowerLaw { alpha: f64, scale: f64 },
    /// Finitely many `(location, mass)` pairs, sorted by location.
    Atoms(Vec<(f64, f64)>),
}

/// A distribution on `[0, ∞)` rescaled at construction to have mean 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution1D {
    family: Family,
    label: String,
}

impl Distribution1D {
    /// Uniform on `[a, b]`, rescaled to `[2a/(a+b), 2b/(a+b)]`.
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a >= 0.0 && b > a) {
            return Err(Error::InvalidDistribution(format!("uniform needs 0 <= a < b, got {a}, {b}")));
        }
        let c = 2.0 / (a + b);
        Ok(Self {
            family: Family::Uniform { lo: a * c, hi: b * c },
            label: format!("uniform:{a},{b}"),
        })
    }

    pub fn exponential() -> Self {
        Self {
            family: Family::Exponential,
            label: "exp".into(),
        }
    }

    pub fn poly32() -> Self {
        Self {
            family: Family::Poly32,
            label: "poly32".into(),
        }
    }

    /// Density proportional to `x^(-alpha)` near zero, `0 < alpha < 1`.
    pub fn power_law(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidDistribution(format!("power law needs 0 < alpha < 1, got {alpha}")));
        }
        Ok(Self {
            family: Family::PowerLaw {
                alpha,
                scale: (2.0 - alpha) / (1.0 - alpha),
            },
            label: format!("power:{alpha}"),
        })
    }

    /// Point masses given as `(mass, location)` pairs; locations are
    /// rescaled so the mean is 1.
    pub fn atoms(pairs: &[(f64, f64)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidDistribution("no atoms".into()));
        }
        let mut total = 0.0;
        let mut mean = 0.0;
        for &(m, l) in pairs {
            if !(m > 0.0 && m <= 1.0 && l.is_finite() && l >= 0.0) {
                return Err(Error::InvalidDistribution(format!("bad atom (mass {m}, location {l})")));
            }
            total += m;
            mean += m * l;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!("atom masses sum to {total}")));
        }
        if mean <= 0.0 {
            return Err(Error::InvalidDistribution("mean is zero".into()));
        }
        let mut atoms: Vec<(f64, f64)> = pairs.iter().map(|&(m, l)| (l / mean, m)).collect();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (l, m) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == l => last.1 += m,
                _ => merged.push((l, m)),
            }
        }
        let label = pairs
            .iter()
            .map(|(m, l)| format!("{m},{l}"))
            .collect::<Vec<_>>()
            .join(",");
        Ok(Self {
            family: Family::Atoms(merged),
            label: format!("atom:{label}"),
        })
    }

    pub fn point_mass() -> Self {
        Self::atoms(&[(1.0, 1.0)]).expect("valid")
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// `(lo, hi)`, with `hi = +∞` for unbounded support.
    pub fn support(&self) -> (f64, f64) {
        match &self.family {
            Family::Uniform { lo, hi } => (*lo, *hi),
            Family::Exponential => (0.0, f64::INFINITY),
            Family::Poly32 => (0.0, 2.0),
            Family::PowerLaw { scale, .. } => (0.0, *scale),
            Family::Atoms(a) => (a[0].0, a[a.len() - 1].0),
        }
    }

    /// `(location, mass)` pairs; empty for atomless families.
    pub fn atom_list(&self) -> &[(f64, f64)] {
        match &self.family {
            Family::Atoms(a) => a,
            _ => &[],
        }
    }

    pub fn pdf(&self, x: f64) -> Option<f64> {
        Some(match &self.family {
            Family::Uniform { lo, hi } => {
                if x >= *lo && x <= *hi {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
            Family::Exponential => {
                if x >= 0.0 {
                    (-x).exp()
                } else {
                    0.0
                }
            }
            Family::Poly32 => {
                if (0.0..=2.0).contains(&x) {
                    0.75 * x * (2.0 - x)
                } else {
                    0.0
                }
            }
            Family::PowerLaw { alpha, scale } => {
                if x > 0.0 && x <= *scale {
                    (1.0 - alpha) / scale * (x / scale).powf(-alpha)
                } else {
                    0.0
                }
            }
            Family::Atoms(_) => return None,
        })
    }

    /// `P(X <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        match &self.family {
            Family::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            Family::Exponential => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-x).exp_m1()
                }
            }
            Family::Poly32 => {
                let t = x.clamp(0.0, 2.0);
                0.75 * t * t - 0.25 * t * t * t
            }
            Family::PowerLaw { alpha, scale } => {
                if x <= 0.0 {
                    0.0
                } else {
                    (x / scale).min(1.0).powf(1.0 - alpha)
                }
            }
            Family::Atoms(a) => a.iter().filter(|p| p.0 <= x).map(|p| p.1).sum::<f64>().min(1.0),
        }
    }

    /// `P(X < x)`.
    pub fn cdf_left(&self, x: f64) -> f64 {
        match &self.family {
            Family::Atoms(a) => a.iter().filter(|p| p.0 < x).map(|p| p.1).sum::<f64>().min(1.0),
            _ => self.cdf(x),
        }
    }

    /// Smallest `x` with `P(X <= x) >= u`.
    pub fn quantile(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        match &self.family {
            Family::Uniform { lo, hi } => lo + u * (hi - lo),
            Family::Exponential => -(-u).ln_1p(),
            Family::Poly32 => {
                // F is increasing on [0, 2]; Newton from a bisection bracket
                let (mut a, mut b) = (0.0f64, 2.0f64);
                for _ in 0..200 {
                    let m = 0.5 * (a + b);
                    if self.cdf(m) < u {
                        a = m;
                    } else {
                        b = m;
                    }
                    if b - a < 1e-15 {
                        break;
                    }
                }
                0.5 * (a + b)
            }
            Family::PowerLaw { alpha, scale } => scale * u.powf(1.0 / (1.0 - alpha)),
            Family::Atoms(a) => {
                let mut acc = 0.0;
                for &(l, m) in a {
                    acc += m;
                    if u <= acc {
                        return l;
                    }
                }
                a[a.len() - 1].0
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.family {
            Family::Poly32 => {
                let (a, b, c) = (rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>());
                2.0 * a.max(b).min(a.min(b).max(c))
            }
            Family::Atoms(a) => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for &(l, m) in a {
                    acc += m;
                    if u < acc {
                        return l;
                    }
                }
                a[a.len() - 1].0
            }
            _ => self.quantile(rng.random::<f64>()),
        }
    }

    /// `E[g(X); a <= X < b]`, with optional kinks of `g` as breakpoints.
    pub fn expect_range(&self, g: impl Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64]) -> Result<f64> {
        if let Family::Atoms(atoms) = &self.family {
            return Ok(atoms
                .iter()
                .filter(|p| p.0 >= a && p.0 < b)
                .map(|&(l, m)| m * g(l))
                .sum());
        }
        let (lo, hi) = self.support();
        let (a, b) = (a.max(lo), b.min(hi));
        if a >= b {
            return Ok(0.0);
        }
        match &self.family {
            Family::PowerLaw { .. } => {
                let ubreaks: Vec<f64> = breaks.iter().map(|&x| self.cdf(x)).collect();
                integrate_with_breaks(|u| g(self.quantile(u)), self.cdf(a), self.cdf(b), &ubreaks, QUAD_TOL)
            }
            _ => integrate_with_breaks(|x| g(x) * self.pdf(x).unwrap_or(0.0), a, b, breaks, QUAD_TOL),
        }
    }

    /// `E[g(X)]`.
    pub fn expect(&self, g: impl Fn(f64) -> f64, breaks: &[f64]) -> Result<f64> {
        let (lo, hi) = self.support();
        let top = if hi.is_finite() { hi + 1.0 } else { hi };
        self.expect_range(g, lo, top, breaks)
    }

    /// Whether `E[1/X]` is finite, decided from the family.
    pub fn harmonic_moment_finite(&self) -> bool {
        match &self.family {
            Family::Uniform { lo, .. } => *lo > 0.0,
            Family::Exponential | Family::PowerLaw { .. } => false,
            Family::Poly32 => true,
            Family::Atoms(a) => a[0].0 > 0.0,
        }
    }

    /// `E[1/X]`.
    pub fn harmonic_moment(&self) -> Result<f64> {
        if !self.harmonic_moment_finite() {
            return Err(Error::HarmonicMomentInfinite);
        }
        self.expect(|x| 1.0 / x, &[])
    }
}

impl fmt::Display for Distribution1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl FromStr for Distribution1D {
    type Err = Error;

    /// `uniform:a,b`, `exp`, `poly32`, `power:alpha` or
    /// `atom:mass,location,mass,location,...`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = s.split_once(':').unwrap_or((s, ""));
        let nums = || -> Result<Vec<f64>> {
            params
                .split(',')
                .filter(|p| !p.trim().is_empty())
                .map(|p| {
                    p.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidDistribution(format!("bad number {p:?} in {s:?}")))
                })
                .collect()
        };
        let v = nums()?;
        let arity = |k: usize| {
            if v.len() == k {
                Ok(())
            } else {
                Err(Error::InvalidDistribution(format!("{name} takes {k} parameters, got {}", v.len())))
            }
        };
        match name.trim() {
            "uniform" => {
                arity(2)?;
                Self::uniform(v[0], v[1])
            }
            "exp" | "exponential" => {
                arity(0)?;
                Ok(Self::exponential())
            }
            "poly32" => {
                arity(0)?;
                Ok(Self::poly32())
            }
            "power" => {
                arity(1)?;
                Self::power_law(v[0])
            }
            "atom" | "atoms" => {
                if v.is_empty() || v.len() % 2 != 0 {
                    return Err(Error::InvalidDistribution("atom takes mass,location pairs".into()));
                }
                let pairs: Vec<(f64, f64)> = v.chunks(2).map(|c| (c[0], c[1])).collect();
                Self::atoms(&pairs)
            }
            other => Err(Error::InvalidDistribution(format!("unknown distribution {other:?}"))),
        }
    }
}
