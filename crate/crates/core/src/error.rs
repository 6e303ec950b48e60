use thiserror::Error;

use crate::trees::SupportConditionReport;

/// Errors reported by constructors and operations in this crate.
///
/// Arithmetic overflow is deliberately absent: entries are exact rationals
/// over 64-bit components and overflow aborts (see [`crate::ratio::Rational`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix dimensions must be positive, got {n}x{m}")]
    ZeroDimension { n: usize, m: usize },

    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("cell ({row}, {col}) lies outside the {n}x{m} grid")]
    CellOutOfBounds {
        row: usize,
        col: usize,
        n: usize,
        m: usize,
    },

    #[error("zero denominator in rational {num}/0")]
    ZeroDenominator { num: i64 },

    #[error("cannot parse {text:?} as an exact rational")]
    MalformedRational { text: String },

    #[error("{n} and {m} are not coprime (gcd {gcd})")]
    NotCoprime { n: usize, m: usize, gcd: usize },

    #[error("block {index} is {found_n}x{found_m}, expected {n}x{m}")]
    BlockShapeMismatch {
        index: usize,
        found_n: usize,
        found_m: usize,
        n: usize,
        m: usize,
    },

    #[error("block {index} is not doubly stochastic")]
    BlockNotDoublyStochastic { index: usize },

    #[error("got {blocks} blocks for scale {scale}; a scaled block diagonal is doubly stochastic only when the counts agree")]
    BlockCountMismatch { blocks: usize, scale: usize },

    #[error("{what} out of range: {details}")]
    ParameterRange { what: &'static str, details: String },

    #[error("support size {s} targets require that neither dimension divides the other, got {n}x{m}")]
    DivisibilityConstraint { n: usize, m: usize, s: usize },

    #[error("support violates the extremality conditions: {report}")]
    SupportConditions { report: SupportConditionReport },

    #[error("malformed tree: {details}")]
    MalformedTree { details: String },

    #[error("matrix is not extremal: {details}")]
    NotExtremal { details: String },

    #[error("matrix is {found_n}x{found_m}, expected {expected}")]
    WrongShape {
        found_n: usize,
        found_m: usize,
        expected: String,
    },

    #[error("equal-multiset pairs exist only for n >= 6, got n = {n}")]
    PairOrderTooSmall { n: usize },

    #[error("{what} exceeds the enumeration guard: {details}")]
    GuardExceeded { what: &'static str, details: String },

    #[error("matrix entries are not all integers, cannot emit csv")]
    NonIntegerCsv,

    #[error("malformed {format} input: {details}")]
    MalformedInput {
        format: &'static str,
        details: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
