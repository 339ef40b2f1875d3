use thiserror::Error;

/// Which defining condition a proposed generating set violates.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratingSetError {
    #[error("X has {0} elements, valency must be at least 3")]
    TooFew(usize),
    #[error("X contains the identity (must be unit-free)")]
    ContainsIdentity,
    #[error("X contains {0} more than once")]
    Duplicate(String),
    #[error("X not inverse-closed: inverse of {0} is missing")]
    NotInverseClosed(String),
    #[error("X does not generate the group (generates a subgroup of order {0})")]
    DoesNotGenerate(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("element {element} does not belong to {group}")]
    ForeignElement { element: String, group: String },
    #[error(transparent)]
    GeneratingSet(#[from] GeneratingSetError),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("size guard: {what} is {size}, limit is {limit}")]
    SizeGuard {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
