//! Exact arithmetic for doubly stochastic n x m arrays: nonnegative arrays
//! whose columns each sum to n and whose rows each sum to m. The library
//! constructs such arrays, verifies them, solves for the unique array on a
//! given support, enumerates the extreme points of small grids, and maps
//! extremal n x (n+1) arrays to edge-labeled trees.
//!
//! All entries are exact rationals; there is no floating point anywhere.
//! Arithmetic that would overflow 64-bit reduced form panics rather than
//! returning a wrong answer.

#![forbid(unsafe_code)]

pub mod construct;
pub mod error;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod oracle;
pub mod ratio;
pub mod trees;

pub use construct::{
    block_compose, euclid_array, extremal_with_support_size, lemma_array, min_support_array,
    prototype_path, trapezoid_array, trapezoid_profile, BlockMethod, PrototypeKind,
    TrapezoidProfile,
};
pub use error::{Error, Result};
pub use graph::{
    build_graph, components, has_cycle, is_extremal, solve_support, solve_support_ranked,
    verify_report, BipartiteGraph, Component, GraphEdge, InfeasibleReason, SolveOutcome,
};
pub use matrix::{
    check_gcd_multiples, entry_multiset, min_support_size, support, verify_doubly_stochastic,
    EntryMultiset, ExactMatrix, SupportSet, VerifyReport,
};
pub use oracle::{
    canonical_matrix, enumerate_extremal, enumerate_extremal_parallel, enumeration_summary,
    equivalence_classes, support_size_spectrum, verify_lower_bound, EnumerationSummary,
    EquivalenceClass, ExtremalCatalog,
};
pub use ratio::Rational;
pub use trees::{
    array_to_tree, canonical_tree_code, check_support_conditions, count_extremal_formula,
    count_tree_classes, enumerate_trees, extremal_from_support, loukaki_pair, prufer_decode,
    prufer_encode, tree_to_array, CanonicalTreeCode, LabeledTree, RowCellCount,
    SupportConditionReport,
};
