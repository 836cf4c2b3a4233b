//! Adapting set-based single-conclusion consequence to multisets.
//!
//! A relation between formula *sets* and single formulas induces a relation
//! on multisets by forgetting multiplicities: Γ yields Δ when the support of
//! Γ yields every formula in the support of Δ.  Monotonicity, cut, and
//! substitution-invariance of the induced relation are inherited from the
//! set-level relation, so they are property-tested here rather than assumed.

use std::collections::BTreeSet;

use crate::formula::Formula;
use crate::multiset::Multiset;

/// The multiset relation induced by a set-level single-conclusion relation.
pub fn mdr_from_tcr(
    tcr: &dyn Fn(&BTreeSet<Formula>, &Formula) -> bool,
    g: &Multiset<Formula>,
    d: &Multiset<Formula>,
) -> bool {
    let base: BTreeSet<Formula> = g.support().cloned().collect();
    d.support().all(|psi| tcr(&base, psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Substitution, parse_formula, parse_formula_multiset as pm};
    use proptest::prelude::*;

    /// Membership: X yields a exactly when a ∈ X.
    fn membership(x: &BTreeSet<Formula>, a: &Formula) -> bool {
        x.contains(a)
    }

    /// Two-valued consequence for the {&, variable} fragment: every 0/1
    /// valuation making all of X true makes a true.
    fn classical_meet(x: &BTreeSet<Formula>, a: &Formula) -> bool {
        fn vars(f: &Formula, out: &mut BTreeSet<String>) {
            match f {
                Formula::Var(v) => {
                    out.insert(v.clone());
                }
                Formula::Meet(l, r) => {
                    vars(l, out);
                    vars(r, out);
                }
                _ => {}
            }
        }
        fn eval(f: &Formula, truth: &BTreeSet<String>) -> bool {
            match f {
                Formula::Var(v) => truth.contains(v),
                Formula::Meet(l, r) => eval(l, truth) && eval(r, truth),
                _ => unreachable!("the test fragment only uses variables and &"),
            }
        }
        let mut vs = BTreeSet::new();
        for f in x {
            vars(f, &mut vs);
        }
        vars(a, &mut vs);
        let vs: Vec<String> = vs.into_iter().collect();
        (0..1usize << vs.len()).all(|mask| {
            let truth: BTreeSet<String> =
                vs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| v.clone()).collect();
            !x.iter().all(|f| eval(f, &truth)) || eval(a, &truth)
        })
    }

    #[test]
    fn multiplicities_are_forgotten() {
        let g = pm("[p, p]").unwrap();
        let d = pm("[p, p, p]").unwrap();
        assert!(mdr_from_tcr(&membership, &g, &d));
        assert!(mdr_from_tcr(&membership, &g, &Multiset::new()));
        assert!(!mdr_from_tcr(&membership, &g, &pm("[q]").unwrap()));
    }

    #[test]
    fn conjunction_consequence_lifts() {
        let g = pm("[p & q]").unwrap();
        assert!(mdr_from_tcr(&classical_meet, &g, &pm("[p, q, q & p]").unwrap()));
        assert!(!mdr_from_tcr(&classical_meet, &pm("[p]").unwrap(), &pm("[p & q]").unwrap()));
    }

    fn small_formula() -> impl Strategy<Value = Formula> {
        let var = prop_oneof![Just("p"), Just("q"), Just("r")].prop_map(|v| Formula::Var(v.to_string()));
        var.prop_recursive(2, 8, 2, |inner| {
            (inner.clone(), inner).prop_map(|(l, r)| Formula::Meet(Box::new(l), Box::new(r)))
        })
    }

    fn small_multiset() -> impl Strategy<Value = Multiset<Formula>> {
        prop::collection::vec(small_formula(), 0..4).prop_map(|v| v.into_iter().collect())
    }

    proptest! {
        /// The induced relation keeps submultiset reflexivity, inherits cut
        /// from the set level, and commutes with substitution when the base
        /// relation is substitution-invariant (both test relations are).
        #[test]
        fn induced_relation_laws(g in small_multiset(), d in small_multiset(), e in small_multiset()) {
            if d.subset_of(&g) {
                prop_assert!(mdr_from_tcr(&classical_meet, &g, &d));
            }
            if mdr_from_tcr(&classical_meet, &g, &d) && mdr_from_tcr(&classical_meet, &d, &e) {
                prop_assert!(mdr_from_tcr(&classical_meet, &g, &e));
            }
            let sigma = Substitution::from_pairs([
                ("p".to_string(), parse_formula("q & r").unwrap()),
            ]);
            if mdr_from_tcr(&classical_meet, &g, &d) {
                prop_assert!(mdr_from_tcr(
                    &classical_meet,
                    &sigma.apply_multiset(&g),
                    &sigma.apply_multiset(&d),
                ));
            }
        }
    }
}
