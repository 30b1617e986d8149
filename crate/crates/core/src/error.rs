use thiserror::Error;

use crate::model::ObjectKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("problem has no states")]
    EmptyProblem,

    #[error("need at least two agents, got {0}")]
    TooFewAgents(usize),

    #[error("state {state} has {found} values, expected {expected}")]
    DimensionMismatch {
        state: usize,
        expected: usize,
        found: usize,
    },

    #[error("value {value} of agent {agent} in state {state} is negative or not finite")]
    NegativeValue {
        state: usize,
        agent: usize,
        value: f64,
    },

    #[error("invalid probability {0}")]
    InvalidProbability(f64),

    #[error("probabilities sum to {0}, expected 1")]
    ProbabilitiesDoNotSumToOne(f64),

    #[error("agent {0} has zero expected value")]
    ZeroExpectedValue(usize),

    #[error("theta must be in {range}, got {value}")]
    InvalidTheta { value: f64, range: &'static str },

    #[error("rule {rule} cannot divide a {kind}")]
    RuleKindMismatch { rule: String, kind: ObjectKind },

    #[error("agent index {index} out of range for {n} agents")]
    AgentOutOfRange { index: usize, n: usize },

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("simplex iteration limit {0} reached")]
    IterationLimit(usize),

    #[error("malformed linear program: {0}")]
    MalformedProgram(String),

    #[error("ratio denominator is zero")]
    DegenerateDenominator,

    #[error("m must satisfy 1 <= m <= n-1, got m={m} for n={n}")]
    InvalidM { n: usize, m: usize },

    #[error("quadrature did not converge on [{lo}, {hi}]")]
    QuadratureNonConvergence { lo: f64, hi: f64 },

    #[error("argument {0} outside the function's domain")]
    DomainError(f64),

    #[error("no finite threshold T exists for this distribution")]
    NoFiniteT,

    #[error("harmonic moment E(1/X) is infinite for this distribution")]
    HarmonicMomentInfinite,

    #[error("distribution has zero mean absolute deviation")]
    ZeroDeviation,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
