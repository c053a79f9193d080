use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what}: size {got} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        got: usize,
        cap: usize,
    },

    #[error("family is not a topology: {0}")]
    StrictNotATopology(String),

    #[error("point {point} out of range for a {n}-point space")]
    OutOfRange { point: usize, n: usize },

    #[error("invalid minimal neighbourhoods: {0}")]
    InvalidNeighborhoods(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("map is not a pairwise homeomorphism: {0}")]
    NotInvertible(String),

    #[error("map is not pairwise continuous: {0}")]
    NotPairwiseContinuous(String),

    #[error("internal equivalence violated: {0}")]
    InternalEquivalenceViolation(String),

    #[error("characterization and oracle disagree: {0}")]
    OracleDisagreement(String),

    #[error("search budget of {budget} tables exhausted")]
    Timeout { budget: u64 },

    #[error("{0}")]
    Invalid(String),
}
