//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures surfaced by library operations.
///
/// Variants are grouped by how the CLI maps them to exit codes: malformed or
/// over-cap inputs, exhausted search budgets, and internal invariant
/// violations (a non-dividing count is a mathematical finding, not a bug in
/// the caller's input).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("signatures do not match")]
    SignatureMismatch,

    #[error("morphism has length {got}, expected {expected}")]
    MorphismLength { got: usize, expected: usize },

    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("enumeration budget exceeded: {what} needs {needed} items, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("genericity violation: angle difference {diff} is a multiple of 1/{n}")]
    Genericity { diff: String, n: usize },

    #[error("cut genericity violation: theta {theta} aligns with a point angle modulo 1/{n}")]
    CutGenericity { theta: String, n: usize },

    #[error("sector count n={n} must be even for the colored tournament view")]
    OddSectorCount { n: usize },

    #[error("partition word uses n={got}, expected n={expected}")]
    PartitionMismatch { got: usize, expected: usize },

    #[error("labeled count {count} is not divisible by automorphism group order {aut}")]
    NonDivisibleCount { count: u64, aut: u64 },

    #[error("expansion does not project onto the given structure")]
    NotAnExpansion,

    #[error("no copies of the target structure: {0}")]
    NoCopies(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
