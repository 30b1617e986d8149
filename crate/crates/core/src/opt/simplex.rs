//! Dense two-phase primal simplex with Bland's pivoting rule.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// `coeffs · x (= or <=) rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

impl Row {
    pub fn new(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self { coeffs, rhs }
    }
}

/// `optimize objective · x` subject to `eq` rows, `le` rows and
/// `lower <= x <= upper` bounds. Lower bounds must be finite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub eq: Vec<Row>,
    pub le: Vec<Row>,
    pub bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let bounds = vec![(0.0, f64::INFINITY); objective.len()];
        Self {
            sense,
            objective,
            eq: Vec::new(),
            le: Vec::new(),
            bounds,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_eq(&mut self, coeffs: Vec<f64>, rhs: f64) {
        self.eq.push(Row::new(coeffs, rhs));
    }

    pub fn add_le(&mut self, coeffs: Vec<f64>, rhs: f64) {
        self.le.push(Row::new(coeffs, rhs));
    }

    pub fn add_ge(&mut self, coeffs: Vec<f64>, rhs: f64) {
        self.le
            .push(Row::new(coeffs.into_iter().map(|c| -c).collect(), -rhs));
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_vars();
        if self.bounds.len() != n {
            return Err(Error::MalformedProgram(format!(
                "{} bounds for {n} variables",
                self.bounds.len()
            )));
        }
        for row in self.eq.iter().chain(&self.le) {
            if row.coeffs.len() != n {
                return Err(Error::MalformedProgram(format!(
                    "row of length {} for {n} variables",
                    row.coeffs.len()
                )));
            }
            if !row.rhs.is_finite() || row.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::MalformedProgram("non-finite coefficient".into()));
            }
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if !lo.is_finite() || hi.is_nan() || lo > hi {
                return Err(Error::MalformedProgram(format!(
                    "bad bounds [{lo}, {hi}] on variable {j}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

struct Tableau {
    /// `m` constraint rows followed by the objective row; last column is rhs.
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
    tol: f64,
    iterations: usize,
    cap: usize,
}

impl Tableau {
    fn m(&self) -> usize {
        self.basis.len()
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.cols + 1;
        let p = self.t[r][c];
        for v in &mut self.t[r][..w] {
            *v /= p;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row[..w].iter_mut().zip(&pivot_row[..w]) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
        self.iterations += 1;
    }

    /// Minimizes the objective row over columns `< allowed`.
    fn run(&mut self, allowed: usize) -> Result<()> {
        let m = self.m();
        loop {
            let obj = &self.t[m];
            let Some(c) = (0..allowed).find(|&j| obj[j] < -self.tol) else {
                return Ok(());
            };
            if self.iterations >= self.cap {
                return Err(Error::IterationLimit(self.cap));
            }
            let rhs = self.cols;
            let mut best: Option<(f64, usize, usize)> = None;
            for i in 0..m {
                let a = self.t[i][c];
                if a > self.tol {
                    let ratio = self.t[i][rhs] / a;
                    let better = match best {
                        None => true,
                        Some((br, _, bb)) => {
                            ratio < br - self.tol * br.abs().max(1.0)
                                || (ratio <= br + self.tol * br.abs().max(1.0)
                                    && self.basis[i] < bb)
                        }
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            let Some((_, r, _)) = best else {
                return Err(Error::Unbounded);
            };
            self.pivot(r, c);
        }
    }
}

/// Solves `lp` to within pivot tolerance `tol`.
///
/// Pivoting follows Bland's rule (lowest eligible index for both the
/// entering and the leaving variable), so the path is deterministic and
/// cannot cycle. The iteration cap is `10 * (rows + cols)`.
pub fn simplex_solve(lp: &LinearProgram, tol: f64) -> Result<LpSolution> {
    lp.validate()?;
    let nv = lp.n_vars();

    // shift x = lo + y with y >= 0 and turn finite upper bounds into rows
    let mut rows: Vec<(Vec<f64>, f64, bool)> = Vec::new();
    let shift = |row: &Row| -> f64 {
        row.rhs
            - row
                .coeffs
                .iter()
                .zip(&lp.bounds)
                .map(|(a, (lo, _))| a * lo)
                .sum::<f64>()
    };
    for r in &lp.eq {
        rows.push((r.coeffs.clone(), shift(r), true));
    }
    for r in &lp.le {
        rows.push((r.coeffs.clone(), shift(r), false));
    }
    for (j, &(lo, hi)) in lp.bounds.iter().enumerate() {
        if hi.is_finite() {
            let mut coeffs = vec![0.0; nv];
            coeffs[j] = 1.0;
            rows.push((coeffs, hi - lo, false));
        }
    }

    let m = rows.len();
    let n_slack = rows.iter().filter(|r| !r.2).count();
    // artificial variables only where the slack cannot start in the basis
    let needs_art: Vec<bool> = rows.iter().map(|r| r.2 || r.1 < 0.0).collect();
    let n_art = needs_art.iter().filter(|&&a| a).count();
    let cols = nv + n_slack + n_art;
    let art_start = nv + n_slack;

    let mut t = vec![vec![0.0; cols + 1]; m + 1];
    let mut basis = vec![0; m];
    let (mut s, mut a) = (nv, art_start);
    for (i, (coeffs, rhs, is_eq)) in rows.iter().enumerate() {
        let sign = if *rhs < 0.0 { -1.0 } else { 1.0 };
        for j in 0..nv {
            t[i][j] = sign * coeffs[j];
        }
        t[i][cols] = sign * rhs;
        if !is_eq {
            t[i][s] = sign;
            if !needs_art[i] {
                basis[i] = s;
            }
            s += 1;
        }
        if needs_art[i] {
            t[i][a] = 1.0;
            basis[i] = a;
            a += 1;
        }
    }

    let cap = 10 * (m + cols);
    let mut tab = Tableau {
        t,
        basis,
        cols,
        tol,
        iterations: 0,
        cap,
    };

    if n_art > 0 {
        for i in 0..m {
            if needs_art[i] {
                for j in 0..=cols {
                    if j < art_start || j == cols {
                        let v = tab.t[i][j];
                        tab.t[m][j] -= v;
                    }
                }
            }
        }
        tab.run(cols)?;
        let infeas = -tab.t[m][cols];
        let scale = rows.iter().map(|r| r.1.abs()).fold(1.0, f64::max);
        if infeas > tol * scale * (m as f64) {
            return Err(Error::Infeasible);
        }
        // drive artificials out of the basis, dropping redundant rows
        let mut i = 0;
        while i < tab.m() {
            if tab.basis[i] >= art_start {
                match (0..art_start).find(|&j| tab.t[i][j].abs() > tol) {
                    Some(j) => {
                        tab.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        tab.t.remove(i);
                        tab.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    // phase 2 on the original objective, written as a minimization
    let m = tab.m();
    let sign = match lp.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let mut obj = vec![0.0; cols + 1];
    for j in 0..nv {
        obj[j] = sign * lp.objective[j];
    }
    for i in 0..m {
        let cb = if tab.basis[i] < nv {
            sign * lp.objective[tab.basis[i]]
        } else {
            0.0
        };
        if cb != 0.0 {
            for j in 0..=cols {
                obj[j] -= cb * tab.t[i][j];
            }
        }
    }
    tab.t[m] = obj;
    tab.run(art_start)?;

    let mut x: Vec<f64> = lp.bounds.iter().map(|b| b.0).collect();
    for i in 0..m {
        let j = tab.basis[i];
        if j < nv {
            x[j] += tab.t[i][cols];
        }
    }
    let objective = x.iter().zip(&lp.objective).map(|(v, c)| v * c).sum();
    Ok(LpSolution {
        x,
        objective,
        iterations: tab.iterations,
    })
}
