//! Model-theoretic side: finite algebras, hypermatrix models and their
//! consequence relations, filter generation, reduction, the sequent bridge,
//! monoid-valued and fuzzy matrices, and the exact [0,1] oracle.

pub mod algebra;
pub mod downset;
pub mod fuzzy;
pub mod gentzen;
pub mod hypermatrix;
pub mod leibniz;
pub mod monoid_matrix;
pub mod oracle;

use thiserror::Error;

pub use algebra::{FiniteAlgebra, luk_value};
pub use downset::MultisetDownset;
pub use fuzzy::{FuzzyMatrix, FuzzyWitness, Threshold, fuzzy_consequence};
pub use gentzen::{SequentModel, to_multisets, to_sequents};
pub use hypermatrix::{
    GenBounds, GeneratedFilter, HyperVerdict, Hypermatrix, Mode, filter_generate,
    hyper_consequence,
};
pub use leibniz::{LeibnizResult, leibniz, reduce_model};
pub use monoid_matrix::{MonoidMatrix, RoundtripReport, mh_of, roundtrip_check};
pub use oracle::{MvVerdict, MvWitness, OracleOptions, RlWitness, mv_oracle, rl_consequence};

#[derive(Debug, Error)]
pub enum SemanticsError {
    #[error("size guard: {what} would need {got} items (limit {limit})")]
    SizeGuard { what: String, got: usize, limit: usize },
    #[error("operation `{op}` is not interpreted in algebra {algebra}")]
    MissingOperation { op: String, algebra: String },
    #[error("variable `{0}` has no value under the given valuation")]
    UnboundVariable(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Internal cap on enumerated valuation grids.
pub(crate) const MAX_VALUATIONS: usize = 1 << 20;
/// Internal cap on explicitly enumerated multiset families.
pub(crate) const MAX_MEMBERS: usize = 500_000;
