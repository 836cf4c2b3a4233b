//! mdrkit: a toolkit for consequence relations over finite multisets.
//!
//! The crate is organised around one idea: a consequence relation does not
//! have to live on sets of formulas.  Premises and conclusions here are
//! finite *multisets*, and the algebraic scaffolding that makes that work is
//! an ordered commutative monoid whose unit is the least element.  On top of
//! that base the crate provides:
//!
//! * [`multiset`] — the container: arbitrary-precision multiplicities,
//!   pointwise order, lattice operations, truncated difference.
//! * [`formula`] — a small propositional language (`&`, `|`, `*`, `->`, `1`),
//!   substitutions, and the monoid of substitution multisets acting on
//!   formula multisets.
//! * [`structures`] — explicit finite ordered monoids, semirings and modules,
//!   with validators, the relation/operator/system triple of equivalent
//!   presentations of a consequence, exhaustive enumeration, and the lifting
//!   to set-based closure operators.
//! * [`proof`] — Hilbert-style axiomatic systems on formula multisets:
//!   derivation and tree-proof checking, bounded search, and the splitting of
//!   a derivation into a proof tree plus a residual derivation.
//! * [`semantics`] — finite residuated-lattice models, matrix semantics over
//!   multiset filters, filter generation, Leibniz congruences and model
//!   reduction, a sequent-model bridge, and an exact rational oracle for the
//!   infinite-valued Łukasiewicz chain.
//! * [`io`] — a line-oriented text format for all finite structures, used by
//!   the `mdrkit` command-line tool.

pub mod formula;
pub mod io;
pub mod multiset;
pub mod proof;
pub mod semantics;
pub mod structures;

pub use multiset::Multiset;
