//! Fair division of a single random good or bad.
//!
//! The crate implements almost prior-independent division rules (Equal
//! Split, Utilitarian, Proportional, Top-Heavy, Bottom-Heavy), Fair Share
//! verification, the optimal fair prior-dependent rule on finite priors,
//! worst-case efficiency ratios and asymptotic efficiency for i.i.d. priors.
//!
//! ```
//! use fairsplit::{rules, ObjectKind, ValueProfile};
//!
//! let x = ValueProfile::new(vec![1.25, 0.75]).unwrap();
//! let shares = rules::bottom_heavy(&x);
//! assert!((shares.shares()[1] - 5.0 / 6.0).abs() < 1e-12);
//! # let _ = ObjectKind::Bad;
//! ```

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod fairness;
pub mod model;
pub mod opt;
pub mod rules;
pub mod worstcase;

pub use error::{Error, Result};
pub use model::{
    normalize_problem, order_stats, validate_problem, Allocation, DiscreteProblem, ObjectKind,
    OrderStats, State, ValueProfile,
};
pub use rules::{allocate, RuleId, Theta};
