//! Log-log fits of Monte Carlo efficiency ratios against growth laws.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::distribution::Distribution1D;
use super::montecarlo::{monte_carlo_pi, MCEstimate};
use crate::error::{Error, Result};
use crate::model::ObjectKind;
use crate::rules::RuleId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GrowthModel {
    /// `π ≈ c √n`.
    SqrtN,
    /// `π ≈ c n / ln n`.
    NOverLogN,
    /// `π ≈ c`.
    Constant,
}

impl GrowthModel {
    fn predictor(self, n: usize) -> f64 {
        let n = n as f64;
        match self {
            GrowthModel::SqrtN => n.sqrt(),
            GrowthModel::NOverLogN => n / n.ln(),
            GrowthModel::Constant => n,
        }
    }
}

impl fmt::Display for GrowthModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrowthModel::SqrtN => "sqrt-n",
            GrowthModel::NOverLogN => "n-over-log-n",
            GrowthModel::Constant => "constant",
        })
    }
}

impl FromStr for GrowthModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sqrt-n" | "sqrtn" => Ok(GrowthModel::SqrtN),
            "n-over-log-n" | "nlogn" => Ok(GrowthModel::NOverLogN),
            "constant" => Ok(GrowthModel::Constant),
            _ => Err(Error::InvalidArgument(format!("unknown growth model {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthPoint {
    pub n: usize,
    pub estimate: MCEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub model: GrowthModel,
    pub points: Vec<GrowthPoint>,
    /// Slope of `ln π` against `ln g(n)`; for `Constant`, against `ln n`.
    pub slope: f64,
    pub r_squared: f64,
    /// `exp(mean(ln π - ln g(n)))`, the fitted constant with unit slope;
    /// for `Constant`, the geometric mean level.
    pub coefficient: f64,
    pub consistent: bool,
}

/// R² threshold for a consistent fit.
pub const MIN_R_SQUARED: f64 = 0.95;
/// Largest `|slope - 1|` accepted for the growing models.
pub const SLOPE_SLACK: f64 = 0.25;
/// Largest `|slope|` accepted for `Constant`.
pub const FLAT_SLACK: f64 = 0.05;

/// Estimates `π` at each `n` with about `draws / n` profiles (at least
/// 1000) and fits `ln π` against the model.
///
/// `SqrtN` and `NOverLogN` are consistent when `R² >= 0.95` and the slope
/// is within 0.25 of 1; `Constant` when the slope against `ln n` is within
/// 0.05 of 0.
pub fn growth_check(
    d: &Distribution1D,
    rule: RuleId,
    kind: ObjectKind,
    n_grid: &[usize],
    model: GrowthModel,
    draws: usize,
    seed: u64,
) -> Result<GrowthReport> {
    if n_grid.len() < 3 || n_grid.windows(2).any(|w| w[0] >= w[1]) || n_grid[0] < 2 {
        return Err(Error::InvalidArgument("n grid must be increasing with at least 3 points".into()));
    }
    let points = n_grid
        .iter()
        .map(|&n| {
            let samples = (draws / n).max(1000);
            Ok(GrowthPoint {
                n,
                estimate: monte_carlo_pi(d, rule, kind, n, samples, seed)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = points.iter().map(|p| model.predictor(p.n).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.estimate.mean.ln()).collect();
    let (slope, r_squared) = ols(&xs, &ys);
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (coefficient, consistent) = match model {
        GrowthModel::Constant => (mean(&ys).exp(), slope.abs() <= FLAT_SLACK),
        _ => {
            let diffs: Vec<f64> = ys.iter().zip(&xs).map(|(y, x)| y - x).collect();
            (
                mean(&diffs).exp(),
                r_squared >= MIN_R_SQUARED && (slope - 1.0).abs() <= SLOPE_SLACK,
            )
        }
    };
    Ok(GrowthReport {
        model,
        points,
        slope,
        r_squared,
        coefficient,
        consistent,
    })
}

/// Least-squares slope and R²; a perfect (or constant) fit has R² = 1.
fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - my - slope * (x - mx)).powi(2))
        .sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    (slope, r2)
}
