use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group {0} is infinite")]
    InfiniteGroup(String),

    #[error("Hom({source_group}, {target}) is infinite")]
    InfiniteHomSet { source_group: String, target: String },

    #[error("{what} requires {needed} items, over the budget of {budget}")]
    BudgetExceeded {
        what: String,
        needed: String,
        budget: u64,
    },

    #[error("{0} has too many elements for the element-level engine")]
    TooLarge(String),

    #[error("cannot compose: target {left} of the first map differs from source {right} of the second")]
    SourceTargetMismatch { left: String, right: String },

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("morphism is not injective")]
    NotInjective,

    #[error("morphism is not surjective")]
    NotSurjective,

    #[error("duplicate prime {0} in torsion family")]
    DuplicatePrime(u64),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("unknown property `{0}`")]
    UnknownProperty(String),

    /// Two independent computations of the same quantity disagreed.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn budget(what: impl Into<String>, needed: impl ToString, budget: u64) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            needed: needed.to_string(),
            budget,
        }
    }

    /// Resource errors are the ones that say nothing about the mathematics.
    pub fn is_resource_error(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. }
                | Error::InfiniteHomSet { .. }
                | Error::InfiniteGroup(_)
                | Error::TooLarge(_)
        )
    }
}
