//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};

/// Default absolute tolerance.
pub const QUAD_TOL: f64 = 1e-8;
const MAX_DEPTH: u32 = 60;
const PANELS: usize = 32;

/// `∫_a^b f`, where `b` may be `+∞` (handled by `x = a + u/(1-u)`).
///
/// A non-finite value at an endpoint is replaced by the value slightly
/// inside the interval, so integrable endpoint singularities are tolerated.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if b == f64::INFINITY {
        let g = |u: f64| {
            if u >= 1.0 {
                return 0.0;
            }
            let w = 1.0 - u;
            f(a + u / w) / (w * w)
        };
        return integrate_finite(&g, 0.0, 1.0, tol);
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("bad integration range [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate(f, b, a, tol).map(|v| -v);
    }
    integrate_finite(&f, a, b, tol)
}

/// Integrates over `[a, b]` split at the given interior breakpoints.
pub fn integrate_with_breaks(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: f64,
) -> Result<f64> {
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&c| c > a && c < b).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let pieces = cuts.len() + 1;
    let mut lo = a;
    let mut total = 0.0;
    for hi in cuts.into_iter().chain(std::iter::once(b)) {
        total += integrate(&f, lo, hi, tol / pieces as f64)?;
        lo = hi;
    }
    Ok(total)
}

fn integrate_finite(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let h = (b - a) / PANELS as f64;
    let mut total = 0.0;
    for p in 0..PANELS {
        let lo = a + h * p as f64;
        let hi = if p + 1 == PANELS { b } else { lo + h };
        let fa = eval(f, lo, 1.0, hi - lo);
        let fb = eval(f, hi, -1.0, hi - lo);
        let m = 0.5 * (lo + hi);
        let fm = f(m);
        let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += step(f, lo, hi, fa, fm, fb, whole, tol / PANELS as f64, MAX_DEPTH)?;
    }
    Ok(total)
}

fn eval(f: &impl Fn(f64) -> f64, x: f64, inward: f64, width: f64) -> f64 {
    let v = f(x);
    if v.is_finite() {
        return v;
    }
    let mut dx = width * 1e-9;
    for _ in 0..6 {
        let v = f(x + inward * dx);
        if v.is_finite() {
            return v;
        }
        dx *= 10.0;
    }
    v
}

#[allow(clippy::too_many_arguments)]
fn step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(Error::QuadratureNonConvergence { lo: a, hi: b });
    }
    let floor = (1e-15 * (left.abs() + right.abs())).max(1e-16);
    if delta.abs() <= 15.0 * tol.max(floor) || b - a <= 4.0 * f64::EPSILON * a.abs().max(b.abs()) {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureNonConvergence { lo: a, hi: b });
    }
    Ok(step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?
        + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?)
}
