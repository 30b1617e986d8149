//! Almost prior-independent division rules: each maps a realized profile of
//! normalized (dis)utilities to a lottery over agents.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{order_stats, Allocation, ObjectKind, OrderStats, ValueProfile};

/// Fairness parameter of the Top-Heavy family, in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Theta(f64);

impl Theta {
    pub const ONE: Theta = Theta(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value <= 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidTheta {
                value,
                range: "(0,1]",
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

fn check_closed_theta(theta: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&theta) {
        Ok(theta)
    } else {
        Err(Error::InvalidTheta {
            value: theta,
            range: "[0,1]",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RuleId {
    EqualSplit,
    Utilitarian,
    Proportional,
    TopHeavy(Theta),
    BottomHeavy,
    /// Member of the Bottom-Heavy family; `θ` in `[0, 1]`.
    BottomHeavyTheta(f64),
}

impl RuleId {
    pub fn supports(self, kind: ObjectKind) -> bool {
        match self {
            RuleId::TopHeavy(_) => kind == ObjectKind::Good,
            RuleId::BottomHeavy | RuleId::BottomHeavyTheta(_) => kind == ObjectKind::Bad,
            _ => true,
        }
    }

    pub fn check_kind(self, kind: ObjectKind) -> Result<()> {
        if self.supports(kind) {
            Ok(())
        } else {
            Err(Error::RuleKindMismatch {
                rule: self.to_string(),
                kind,
            })
        }
    }

    /// Whether the rule guarantees Fair Share on every problem.
    pub fn is_fair(self) -> bool {
        !matches!(self, RuleId::Utilitarian)
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleId::EqualSplit => write!(f, "es"),
            RuleId::Utilitarian => write!(f, "ut"),
            RuleId::Proportional => write!(f, "pro"),
            RuleId::TopHeavy(t) => write!(f, "th({})", t.value()),
            RuleId::BottomHeavy => write!(f, "bh"),
            RuleId::BottomHeavyTheta(t) => write!(f, "bh({t})"),
        }
    }
}

pub fn equal_split(x: &ValueProfile) -> Allocation {
    Allocation::equal(x.n())
}

/// Splits the object equally among the agents with the best realized value.
pub fn utilitarian(x: &ValueProfile, kind: ObjectKind) -> Allocation {
    let target = match kind {
        ObjectKind::Good => x.max(),
        ObjectKind::Bad => x.min(),
    };
    split_among(x.n(), |i| x.values()[i] == target)
}

/// Good: shares proportional to values. Bad: shares proportional to inverse
/// values, with zero-cost agents absorbing the whole bad.
pub fn proportional(x: &ValueProfile, kind: ObjectKind) -> Allocation {
    let v = x.values();
    match kind {
        ObjectKind::Good => {
            let total = x.sum();
            if total == 0.0 {
                return Allocation::equal(x.n());
            }
            Allocation::from_shares_unchecked(v.iter().map(|xi| xi / total).collect())
        }
        ObjectKind::Bad => {
            if v.contains(&0.0) {
                return split_among(x.n(), |i| v[i] == 0.0);
            }
            let mut inv: Vec<f64> = v.iter().map(|xi| 1.0 / xi).collect();
            let shares = {
                let mut sorted = inv.clone();
                sorted.sort_by(f64::total_cmp);
                let total: f64 = sorted.iter().sum();
                inv.iter_mut().for_each(|s| *s /= total);
                inv
            };
            Allocation::from_shares_unchecked(shares)
        }
    }
}

/// Top-Heavy rule: agents below the top get exactly their Fair Share lower
/// bound `max{1/n + θ/(n-1) (1 - x̄/x_i), 0}`; the top agents split the rest.
pub fn top_heavy(x: &ValueProfile, theta: Theta) -> Allocation {
    let n = x.n();
    let os = order_stats(x);
    if os.levels().len() == 1 {
        return Allocation::equal(n);
    }
    let nf = n as f64;
    let mean = x.mean();
    let coef = theta.value() / (nf - 1.0);
    let v = x.values();
    let mut shares = vec![0.0; n];
    let top = os.levels().last().unwrap().clone();
    let mut used = 0.0;
    for &i in &os.perm()[..top.start] {
        let s = if v[i] == 0.0 {
            0.0
        } else {
            (1.0 / nf + coef * (1.0 - mean / v[i])).max(0.0)
        };
        shares[i] = s;
        used += s;
    }
    let rest = ((1.0 - used) / top.len() as f64).max(0.0);
    for &i in &os.perm()[top] {
        shares[i] = rest;
    }
    Allocation::from_shares_unchecked(shares)
}

/// Bottom-Heavy rule: the longest prefix of low-cost tie blocks whose
/// Fair Share upper bounds `x_{N\i} / (n(n-1) x_i)` fit in one unit gets
/// exactly those bounds; the next block splits the remainder.
pub fn bottom_heavy(x: &ValueProfile) -> Allocation {
    let n = x.n() as f64;
    let total = x.sum();
    let denom = n * (n - 1.0);
    fill_bottom(x, |xi| {
        if xi == 0.0 {
            f64::INFINITY
        } else {
            (total - xi) / (denom * xi)
        }
    })
}

/// Member `θ ∈ [0, 1]` of the Bottom-Heavy family, using the bound
/// `1/n + θ/(n-1) (x̄/x_i - 1)`. `θ = 0` is Equal Split.
pub fn bottom_heavy_theta(x: &ValueProfile, theta: f64) -> Result<Allocation> {
    let theta = check_closed_theta(theta)?;
    if theta == 0.0 {
        return Ok(Allocation::equal(x.n()));
    }
    let nf = x.n() as f64;
    let mean = x.mean();
    let coef = theta / (nf - 1.0);
    Ok(fill_bottom(x, |xi| {
        if xi == 0.0 {
            f64::INFINITY
        } else {
            1.0 / nf + coef * (mean / xi - 1.0)
        }
    }))
}

fn fill_bottom(x: &ValueProfile, bound: impl Fn(f64) -> f64) -> Allocation {
    let n = x.n();
    let os: OrderStats = order_stats(x);
    if os.levels().len() == 1 {
        return Allocation::equal(n);
    }
    let mut shares = vec![0.0; n];
    let mut used = 0.0;
    let mut last_filled = None;
    for (b, block) in os.levels().iter().enumerate() {
        let each = bound(os.sorted()[block.start]);
        let block_total = each * block.len() as f64;
        if used + block_total <= 1.0 {
            for &i in &os.perm()[block.clone()] {
                shares[i] = each;
            }
            used += block_total;
            last_filled = Some(b);
        } else {
            let rest = ((1.0 - used) / block.len() as f64).max(0.0);
            for &i in &os.perm()[block.clone()] {
                shares[i] = rest;
            }
            return Allocation::from_shares_unchecked(shares);
        }
    }
    // every block fit: only rounding mass can be left over
    if let Some(b) = last_filled {
        let block = os.levels()[b].clone();
        let extra = (1.0 - used) / block.len() as f64;
        for &i in &os.perm()[block] {
            shares[i] += extra;
        }
    }
    Allocation::from_shares_unchecked(shares)
}

fn split_among(n: usize, member: impl Fn(usize) -> bool) -> Allocation {
    let count = (0..n).filter(|&i| member(i)).count();
    if count == 0 {
        return Allocation::equal(n);
    }
    let each = 1.0 / count as f64;
    Allocation::from_shares_unchecked((0..n).map(|i| if member(i) { each } else { 0.0 }).collect())
}

/// Dispatches `rule`, refusing rules that are not defined for `kind`.
pub fn allocate(rule: RuleId, x: &ValueProfile, kind: ObjectKind) -> Result<Allocation> {
    rule.check_kind(kind)?;
    Ok(match rule {
        RuleId::EqualSplit => equal_split(x),
        RuleId::Utilitarian => utilitarian(x, kind),
        RuleId::Proportional => proportional(x, kind),
        RuleId::TopHeavy(theta) => top_heavy(x, theta),
        RuleId::BottomHeavy => bottom_heavy(x),
        RuleId::BottomHeavyTheta(theta) => bottom_heavy_theta(x, theta)?,
    })
}
