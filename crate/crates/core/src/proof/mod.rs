//! Schemata, derivations, tree proofs, and proof search.
//!
//! The pieces fit together like this: [`system`] parses and stores rule
//! schemata; [`matching`] finds their substitution instances inside formula
//! multisets; [`derivation`] replays linear step-by-step certificates;
//! [`tree`] checks tree-shaped proofs for single-conclusion systems;
//! [`convert`] moves between the two proof shapes; [`search`] looks for
//! derivations by iterative deepening; and [`tcr`] adapts set-based
//! single-conclusion relations to the multiset interface.

pub mod builtin;
pub mod convert;
pub mod derivation;
pub mod matching;
pub mod search;
pub mod system;
pub mod tcr;
pub mod tree;

use thiserror::Error;

pub use builtin::{BUILTIN_NAMES, builtin_system};
pub use convert::{SplitResult, split_derivation, tree_to_derivation};
pub use derivation::{
    CertificateError, Derivation, StepJust, Verdict, apply_subst, check_derivation, concat,
    format_certificate, parse_certificate, with_context,
};
pub use matching::{match_consecution_exact, match_formula, match_multiset_exact, match_multiset_sub};
pub use search::{Budget, SearchOutcome, search_derivation};
pub use system::{AxiomaticSystem, Schema, SystemError, load_system};
pub use tcr::mdr_from_tcr;
pub use tree::{LeafTag, TreeParseError, TreeProof, check_tree_proof, format_tree, parse_tree};

/// Preconditions that make a proof question ill-posed, as opposed to a
/// proof that merely fails to check.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProofError {
    #[error("the system has a schema with {0} conclusions; this operation needs single-conclusion schemata")]
    NotSingleConclusion(usize),
    #[error("{0}")]
    Precondition(String),
}
