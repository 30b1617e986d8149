#![allow(dead_code)]

use fairsplit::{DiscreteProblem, ObjectKind, State};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random valid problem with `n` agents and `k` states; about one value
/// in seven is zero and the rest are heavy-tailed.
pub fn random_problem(seed: u64, n: usize, k: usize, kind: ObjectKind) -> DiscreteProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 0.05).collect();
    let total: f64 = weights.iter().sum();
    let mut rows: Vec<Vec<f64>> = (0..k)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.random_bool(0.15) {
                        0.0
                    } else {
                        let e = -(1.0 - rng.random::<f64>()).ln();
                        e.powi(rng.random_range(1..=3)) * 10.0
                    }
                })
                .collect()
        })
        .collect();
    for i in 0..n {
        if rows.iter().all(|r| r[i] == 0.0) {
            rows[rng.random_range(0..k)][i] = 1.0;
        }
    }
    let states = rows
        .into_iter()
        .zip(&weights)
        .map(|(v, w)| State::new(w / total, v))
        .collect();
    DiscreteProblem::new(kind, states).expect("generator emits valid problems")
}

pub fn random_shape(seed: u64, max_n: usize, max_k: usize) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    (rng.random_range(2..=max_n), rng.random_range(1..=max_k))
}

/// All permutations of `x`, each with equal probability.
pub fn symmetric_problem(x: &[f64], kind: ObjectKind) -> DiscreteProblem {
    let mut perms = Vec::new();
    permutations(&mut x.to_vec(), 0, &mut perms);
    let p = 1.0 / perms.len() as f64;
    DiscreteProblem::new(kind, perms.into_iter().map(|v| State::new(p, v)).collect()).unwrap()
}

fn permutations(v: &mut Vec<f64>, k: usize, out: &mut Vec<Vec<f64>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

pub fn example1() -> DiscreteProblem {
    DiscreteProblem::new(
        ObjectKind::Bad,
        vec![
            State::new(0.25, vec![1.0, 5.0]),
            State::new(0.25, vec![5.0, 3.0]),
            State::new(0.5, vec![5.0, 4.0]),
        ],
    )
    .unwrap()
}

pub fn ut_counterexample() -> DiscreteProblem {
    let eps = 0.1;
    DiscreteProblem::new(
        ObjectKind::Good,
        vec![
            State::new(1.0 - eps, vec![1.0, 1.0 + eps]),
            State::new(eps, vec![1.0, eps]),
        ],
    )
    .unwrap()
}
