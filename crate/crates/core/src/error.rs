use thiserror::Error;

use crate::families::SubsetMask;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("resource limit: {what} needs {needed} items, cap is {cap}")]
    ResourceLimit {
        what: &'static str,
        needed: String,
        cap: u64,
    },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("parts {first} and {second} overlap (element {element})")]
    OverlappingParts {
        first: usize,
        second: usize,
        element: u32,
    },

    #[error("parts do not cover the ground set (missing {missing})")]
    IncompleteCover { missing: SubsetMask },

    #[error("a weak composition needs at least 2 parts, got {0}")]
    PartCountTooSmall(usize),

    #[error("set {0} is not contained in the ground set")]
    OutsideGround(SubsetMask),

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("instance too large: {0}")]
    InstanceTooLarge(String),

    #[error("duplicate member {0}")]
    DuplicateMember(SubsetMask),

    #[error("duplicate composition at position {0}")]
    DuplicateComposition(usize),

    #[error("composition at position {index} does not match the family: {reason}")]
    MismatchedComposition { index: usize, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
