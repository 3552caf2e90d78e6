//! Exhaustive generation of pattern-avoiding permutations.
//!
//! The crate turns succession rules — maps describing how the active
//! insertion sites of a permutation evolve when the next-largest value is
//! inserted — into constant-amortized-time generators for S_n(P), the
//! length-n permutations avoiding a forbidden-pattern set P. It ships a
//! catalog of regular and colored rules for classes counted by Pell,
//! Fibonacci, Catalan, Schröder and related sequences, a brute-force
//! oracle to verify them, a regularity inference procedure, and a CLI.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod generator;
pub mod pattern_set;
pub mod perm;
pub mod sequences;
pub mod sites;
pub mod succession;
pub mod verify;

pub use catalog::{catalog, entry, CatalogEntry, CatalogRow, Params, Verified};
pub use error::{Error, Result};
pub use generator::{
    bench, cat_metrics, count, generate, generate_transformed, generate_tree, render_tree,
    CatReport, Counters, GenTreeNode, Transform,
};
pub use pattern_set::{
    instantiate_family, FamilyDescriptor, FamilyId, PatternSet, RightJustified,
};
pub use perm::Permutation;
pub use sequences::{SequenceKind, SequenceRef};
pub use sites::{active_sites, insert_at_site, site_count};
pub use succession::{structural_color, Label, Rule, RuleKind, SuccessionFunction};
pub use verify::{
    infer_regular, oracle_generate, oracle_levels, verify_entry, Inference, OracleTree,
    VerificationReport, VerifyStatus,
};
