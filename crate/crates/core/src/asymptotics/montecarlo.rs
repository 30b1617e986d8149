//! Seeded Monte Carlo estimate of the efficiency ratio.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::distribution::Distribution1D;
use crate::error::{Error, Result};
use crate::model::{ObjectKind, ValueProfile};
use crate::rules::{allocate, RuleId};

/// Profiles drawn per stream. Chunk `c` uses ChaCha8 stream `c` of `seed`.
pub const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

// Σu, Σv, Σu², Σv², Σuv for the ratio ū / v̄
#[derive(Clone, Copy, Default)]
struct Moments([f64; 5]);

impl Moments {
    fn push(&mut self, u: f64, v: f64) {
        let m = &mut self.0;
        m[0] += u;
        m[1] += v;
        m[2] += u * u;
        m[3] += v * v;
        m[4] += u * v;
    }

    fn add(mut self, o: &Moments) -> Self {
        for (a, b) in self.0.iter_mut().zip(o.0) {
            *a += b;
        }
        self
    }
}

/// Estimates `E max / E S` (good) or `E S / E min` (bad) from `samples`
/// i.i.d. profiles of length `n`, where `S` is the rule's social value.
///
/// The standard error comes from the delta method on the ratio of the two
/// correlated sample means. A `0/0` ratio (every draw has a zero extreme
/// and zero social value) is reported as 1.
pub fn monte_carlo_pi(
    d: &Distribution1D,
    rule: RuleId,
    kind: ObjectKind,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<MCEstimate> {
    rule.check_kind(kind)?;
    if n < 2 {
        return Err(Error::TooFewAgents(n));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let chunks = samples.div_ceil(CHUNK);
    let per_chunk: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut acc = Moments::default();
            for _ in 0..count {
                let values: Vec<f64> = (0..n).map(|_| d.sample(&mut rng)).collect();
                let x = ValueProfile::new(values).expect("samples are nonnegative");
                let s = allocate(rule, &x, kind).expect("kind checked").welfare(&x);
                match kind {
                    ObjectKind::Good => acc.push(x.max(), s),
                    ObjectKind::Bad => acc.push(s, x.min()),
                }
            }
            acc
        })
        .collect();
    let total = per_chunk.iter().fold(Moments::default(), |a, b| a.add(b));
    let [su, sv, suu, svv, suv] = total.0;
    let m = samples as f64;
    let (u, v) = (su / m, sv / m);
    if v == 0.0 {
        if u == 0.0 {
            return Ok(MCEstimate {
                mean: 1.0,
                std_error: 0.0,
                samples,
                seed,
            });
        }
        return Err(Error::DegenerateDenominator);
    }
    let r = u / v;
    let std_error = if samples > 1 {
        let k = m / (m - 1.0);
        let var_u = k * (suu / m - u * u);
        let var_v = k * (svv / m - v * v);
        let cov = k * (suv / m - u * v);
        ((var_u - 2.0 * r * cov + r * r * var_v).max(0.0) / (v * v * m)).sqrt()
    } else {
        0.0
    };
    Ok(MCEstimate {
        mean: r,
        std_error,
        samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::Theta;

    #[test]
    fn equal_split_gives_expected_max() {
        let d = Distribution1D::uniform(0.0, 1.0).unwrap();
        let est = monte_carlo_pi(&d, RuleId::EqualSplit, ObjectKind::Good, 2, 100_000, 1).unwrap();
        assert!((est.mean - 4.0 / 3.0).abs() < 4.0 * est.std_error + 1e-3, "{est:?}");
        assert!(est.std_error > 0.0 && est.std_error < 0.01);
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let d = Distribution1D::exponential();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| monte_carlo_pi(&d, RuleId::TopHeavy(Theta::ONE), ObjectKind::Good, 7, 20_000, 42))
                .unwrap()
        };
        let a = run(1);
        let b = run(4);
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    }

    #[test]
    fn zero_over_zero() {
        let d = Distribution1D::atoms(&[(0.5, 0.0), (0.5, 1.0)]).unwrap();
        // with 400 agents a zero value is (practically) always present
        let est = monte_carlo_pi(&d, RuleId::BottomHeavy, ObjectKind::Bad, 400, 100, 3).unwrap();
        assert_eq!((est.mean, est.std_error), (1.0, 0.0));
    }

    #[test]
    fn guards() {
        let d = Distribution1D::poly32();
        assert!(monte_carlo_pi(&d, RuleId::BottomHeavy, ObjectKind::Good, 3, 10, 0).is_err());
        assert!(monte_carlo_pi(&d, RuleId::EqualSplit, ObjectKind::Good, 3, 0, 0).is_err());
        assert!(monte_carlo_pi(&d, RuleId::EqualSplit, ObjectKind::Good, 1, 10, 0).is_err());
    }
}
