use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid rule: {0}")]
    InvalidRule(String),

    #[error("inconsistent preferences: {0}")]
    Inconsistent(String),

    #[error("enumeration cap of {cap} exceeded")]
    CapExceeded { cap: u64 },

    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    #[error("profile cannot be completed to a single-peaked profile: {0}")]
    NotCompletableSp(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("weight arithmetic overflow")]
    Overflow,

    #[error("tie branching limit exceeded ({0} states)")]
    TieBranchLimit(usize),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub(crate) fn add_weight(a: u64, b: u64) -> Result<u64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub(crate) fn mul_weight(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}
