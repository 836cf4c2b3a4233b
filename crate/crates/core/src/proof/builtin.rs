//! The built-in axiomatic systems.
//!
//! `MV_s` is a single-conclusion Hilbert system for many-valued
//! consequence: implication and fusion axioms, lattice axioms, the unit,
//! prelinearity, divisibility, and detachment.  `MV` extends it with the
//! fusion-splitting rule `[p*q] |> [p, q]`, the one schema that genuinely
//! needs more than one conclusion.  Every schema is gated by the exact
//! semantic oracle in the tests below, so a typo in the embedded file
//! cannot survive a test run.

use crate::proof::system::{AxiomaticSystem, SystemError, load_system};

const MV_S: &str = include_str!("mv_s.system");

/// The names accepted by [`builtin_system`].
pub const BUILTIN_NAMES: [&str; 2] = ["MV_s", "MV"];

pub fn builtin_system(name: &str) -> Result<AxiomaticSystem, SystemError> {
    match name {
        "MV_s" => load_system(MV_S),
        "MV" => load_system(&format!("{MV_S}rule FusElim: [p*q] |> [p, q]\n")),
        _ => Err(SystemError::UnknownBuiltin(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Consecution, parse_consecution};
    use crate::multiset::Multiset;
    use crate::semantics::{OracleOptions, mv_oracle};

    #[test]
    fn the_two_systems_load_and_differ_by_one_rule() {
        let single = builtin_system("MV_s").unwrap();
        assert!(single.single_conclusion);
        assert!(single.schema("MP").is_some());
        assert!(single.schema("FusElim").is_none());

        let multi = builtin_system("MV").unwrap();
        assert!(!multi.single_conclusion);
        assert_eq!(multi.schemata.len(), single.schemata.len() + 1);
        assert!(multi.schema("FusElim").is_some());

        assert!(matches!(builtin_system("BCK"), Err(SystemError::UnknownBuiltin(_))));
    }

    /// The soundness gate: every schema of MV must hold in the unit
    /// interval.  Axioms are checked as `[] |> [φ]`, rules as themselves.
    /// The full-strength scan lives in the acceptance suite; this one uses
    /// a reduced budget to keep unit runs quick.
    #[test]
    fn every_schema_passes_the_oracle() {
        let sys = builtin_system("MV").unwrap();
        let opts = OracleOptions { max_chain: 7, samples: 300, ..OracleOptions::default() };
        for schema in &sys.schemata {
            let claim = Consecution {
                premises: schema.premises.clone(),
                conclusions: schema.conclusions.clone(),
            };
            let verdict = mv_oracle(&claim, &opts).unwrap();
            assert!(verdict.is_valid(), "schema {} failed the oracle: {verdict:?}", schema.name);
        }
    }

    #[test]
    fn the_gate_would_catch_an_unsound_axiom() {
        let claim = Consecution {
            premises: Multiset::new(),
            conclusions: parse_consecution("[] |> [p -> (p*p)]").unwrap().conclusions,
        };
        let opts = OracleOptions { max_chain: 7, samples: 300, ..OracleOptions::default() };
        assert!(!mv_oracle(&claim, &opts).unwrap().is_valid());
    }
}
