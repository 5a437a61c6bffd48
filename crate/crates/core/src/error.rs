use thiserror::Error;

use crate::state::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Runtime errors raised by the engine. Parse and resolve failures of the
/// scenario format live in [`crate::dsl::DslError`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state has no amplitude mass (every amplitude is zero)")]
    ZeroState,
    #[error("invalid state: {}", join(.0))]
    InvalidState(Vec<Violation>),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("cannot realize `{0}`: its probability is zero")]
    ZeroProbabilityOutcome(String),
    #[error("`{0}` is the realized branch; only non-realized branches can be graded")]
    RealizedOperand(String),
    #[error("no possible branch to bound: the context is deterministic")]
    EmptyOrdering,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("`{to}` is not reachable from `{from}`")]
    Unreachable { from: String, to: String },
    #[error("attaching measurement `{0}` at its own layer would create a cycle")]
    CycleAttempt(String),
    #[error("vertex `{0}` has already been measured")]
    AlreadyExpanded(String),
    #[error("measurement id `{0}` is already in the graph")]
    DuplicateMeasurement(String),
    #[error("context family is empty")]
    EmptyFamily,
    #[error("unknown atom label `{0}`")]
    UnknownAtomLabel(String),
    #[error("carrier has {len} values, above the verifier cap of {cap}")]
    CarrierTooLarge { len: usize, cap: usize },
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("probabilities sum to {0}, not 1")]
    CarrierNotNormalized(f64),
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
