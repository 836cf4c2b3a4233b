//! Explicit finite ordered structures and their consequence apparatus.
//!
//! Everything here is table-driven: carriers are `0..n` with display names,
//! orders are boolean matrices, operations are total tables.  Validators
//! return a [`ValidationReport`] listing every broken law with a witness
//! instead of failing fast, so a structure file with several mistakes is
//! diagnosed in one pass.

pub mod acr;
pub mod deduction;
pub mod module;
pub mod pomonoid;
pub mod semiring;

pub use acr::{ClosureSystem, FiniteAcr};
pub use deduction::{DeductiveOperator, DeductiveRelation, DeductiveSystem};
pub use module::{FiniteModule, ModuleMorphism};
pub use pomonoid::FinitePomonoid;
pub use semiring::FinitePoSemiring;

use std::fmt;
use thiserror::Error;

/// One broken law together with the elements that break it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub law: String,
    pub witness: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.law, self.witness)
    }
}

/// Outcome of a validator.  `violations` are faults in the input;
/// `internal_errors` flag laws that are guaranteed by theorem once the
/// axioms hold, so seeing one means a bug in this crate, not bad input.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub internal_errors: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, law: impl Into<String>, witness: impl Into<String>) {
        self.violations.push(Violation { law: law.into(), witness: witness.into() });
    }

    pub fn push_internal(&mut self, law: impl Into<String>, witness: impl Into<String>) {
        self.internal_errors.push(Violation { law: law.into(), witness: witness.into() });
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty() && self.internal_errors.is_empty()
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
        self.internal_errors.extend(other.internal_errors);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        let mut first = true;
        for v in &self.violations {
            if !first {
                writeln!(f)?;
            }
            write!(f, "violation: {v}")?;
            first = false;
        }
        for v in &self.internal_errors {
            if !first {
                writeln!(f)?;
            }
            write!(f, "internal error: {v}")?;
            first = false;
        }
        Ok(())
    }
}

/// A refused computation, as opposed to a negative verdict.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum StructuresError {
    /// Input exceeds a documented size guard for an exhaustive operation.
    #[error("size guard: {what} has size {got}, limit {limit}")]
    SizeGuard { what: String, got: usize, limit: usize },
    /// The operation's precondition does not hold.
    #[error("precondition: {0}")]
    Precondition(String),
}

pub(crate) fn guard(what: &str, got: usize, limit: usize) -> Result<(), StructuresError> {
    if got > limit {
        Err(StructuresError::SizeGuard { what: what.to_string(), got, limit })
    } else {
        Ok(())
    }
}
