//! Axiomatic systems: named consecution schemata read from a small line-based
//! format.
//!
//! A schema with empty premises is an axiom; any other schema is a deduction
//! rule. Schemata stand for all of their substitution instances.

use std::fmt;

use thiserror::Error;

use crate::formula::{Consecution, ParseError, parse_consecution};
use crate::multiset::Multiset;
use crate::formula::Formula;

/// One consecution schema. `premises |> conclusions`, instantiated by
/// substitutions when matched against concrete multisets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    pub name: String,
    pub premises: Multiset<Formula>,
    pub conclusions: Multiset<Formula>,
}

impl Schema {
    pub fn is_axiom(&self) -> bool {
        self.premises.is_empty()
    }

    /// All schema variables, sorted.
    pub fn vars(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        for f in self.premises.support().chain(self.conclusions.support()) {
            f.collect_vars(&mut out);
        }
        out
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.is_axiom() { "axiom" } else { "rule" };
        let c = Consecution::new(self.premises.clone(), self.conclusions.clone());
        write!(f, "{kind} {}: {c}", self.name)
    }
}

/// A finite list of schemata. Order matters: it fixes the deterministic
/// move order used by derivation search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomaticSystem {
    pub schemata: Vec<Schema>,
    pub single_conclusion: bool,
}

#[derive(Debug, Error)]
pub enum SystemError {
    #[error("line {line}: expected `axiom[ name]: ...` or `rule[ name]: ...`")]
    BadLine { line: usize },
    #[error("line {line}: {err}")]
    BadConsecution { line: usize, err: ParseError },
    #[error("line {line}: axiom has nonempty premises")]
    AxiomWithPremises { line: usize },
    #[error("line {line}: duplicate schema name `{name}`")]
    DuplicateName { line: usize, name: String },
    #[error("unknown builtin system `{0}`")]
    UnknownBuiltin(String),
}

impl AxiomaticSystem {
    pub fn new(schemata: Vec<Schema>) -> Self {
        let single_conclusion = schemata
            .iter()
            .all(|s| s.conclusions.size() == 1u32.into());
        AxiomaticSystem { schemata, single_conclusion }
    }

    pub fn empty() -> Self {
        AxiomaticSystem { schemata: Vec::new(), single_conclusion: true }
    }

    pub fn schema(&self, name: &str) -> Option<&Schema> {
        self.schemata.iter().find(|s| s.name == name)
    }
}

impl fmt::Display for AxiomaticSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.schemata {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Parses a system from text.
///
/// Each nonblank line reads `axiom: [] |> [φ]` or `rule: [Γ] |> [Δ]`, with an
/// optional name before the colon (`rule MP: [p, p->q] |> [q]`). Unnamed
/// schemata are called `axiom1`, `rule1`, ... in order of appearance; names
/// are what derivation certificates cite. Lines starting with `#` are
/// comments.
pub fn load_system(src: &str) -> Result<AxiomaticSystem, SystemError> {
    let mut schemata: Vec<Schema> = Vec::new();
    let (mut n_axioms, mut n_rules) = (0usize, 0usize);
    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let Some((head, body)) = text.split_once(':') else {
            return Err(SystemError::BadLine { line });
        };
        let mut head_words = head.split_whitespace();
        let kind = head_words.next().unwrap_or("");
        let given_name = head_words.next();
        if head_words.next().is_some() {
            return Err(SystemError::BadLine { line });
        }
        let is_axiom = match kind {
            "axiom" => true,
            "rule" => false,
            _ => return Err(SystemError::BadLine { line }),
        };
        let c = parse_consecution(body.trim())
            .map_err(|err| SystemError::BadConsecution { line, err })?;
        if is_axiom && !c.premises.is_empty() {
            return Err(SystemError::AxiomWithPremises { line });
        }
        let name = match given_name {
            Some(n) => n.to_string(),
            None if is_axiom => {
                n_axioms += 1;
                format!("axiom{n_axioms}")
            }
            None => {
                n_rules += 1;
                format!("rule{n_rules}")
            }
        };
        if schemata.iter().any(|s| s.name == name) {
            return Err(SystemError::DuplicateName { line, name });
        }
        schemata.push(Schema { name, premises: c.premises, conclusions: c.conclusions });
    }
    Ok(AxiomaticSystem::new(schemata))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_named_and_unnamed_schemata() {
        let sys = load_system(
            "# a comment\n\
             axiom K: [] |> [p->(q->p)]\n\
             rule MP: [p, p->q] |> [q]\n\
             axiom: [] |> [1]\n",
        )
        .unwrap();
        assert_eq!(sys.schemata.len(), 3);
        assert!(sys.single_conclusion);
        assert!(sys.schema("K").unwrap().is_axiom());
        assert_eq!(sys.schema("MP").unwrap().premises.size(), 2u32.into());
        assert!(sys.schema("axiom1").is_some());
    }

    #[test]
    fn multi_conclusion_rules_clear_the_flag() {
        let sys = load_system("rule: [p*q] |> [p, q]\n").unwrap();
        assert!(!sys.single_conclusion);
        assert!(load_system("").unwrap().single_conclusion);
    }

    #[test]
    fn bad_lines_are_rejected_with_positions() {
        assert!(matches!(
            load_system("lemma: [] |> [p]"),
            Err(SystemError::BadLine { line: 1 })
        ));
        assert!(matches!(
            load_system("axiom: [p] |> [q]"),
            Err(SystemError::AxiomWithPremises { line: 1 })
        ));
        assert!(matches!(
            load_system("rule A: [p] |> [p]\nrule A: [q] |> [q]"),
            Err(SystemError::DuplicateName { line: 2, .. })
        ));
    }

    #[test]
    fn display_round_trips() {
        let text = "axiom K: [] |> [p -> (q -> p)]\nrule MP: [p, p -> q] |> [q]\n";
        let sys = load_system(text).unwrap();
        assert_eq!(load_system(&sys.to_string()).unwrap(), sys);
    }
}
