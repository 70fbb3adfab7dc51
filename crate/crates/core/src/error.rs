use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("indeterminate divisor: every form is zero")]
    IndeterminateDivisor,

    #[error("inconsistent degree profile: {0}")]
    DegreeProfile(String),

    #[error("rank {rank} out of range 0..={max}")]
    RankOutOfRange { rank: usize, max: usize },

    #[error("malformed instance: {0}")]
    MalformedInstance(String),

    #[error("cost guard: k = {k} at q = {q} would enumerate too many subspaces (pass force_large to override)")]
    CostGuard { k: usize, q: u32 },

    #[error("parse error: {0}")]
    Parse(String),

    /// Reaching this is a bug in the library, not in the caller's input.
    #[error("internal error: {0}")]
    Internal(String),
}
