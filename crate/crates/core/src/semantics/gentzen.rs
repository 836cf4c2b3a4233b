//! The bridge between multiset-designating and sequence-designating models.
//!
//! A sequent model designates finite sequences of elements. Expanding every
//! designated multiset to all of its orderings, and collapsing sequences
//! back to their underlying multisets, are mutually inverse between
//! hypermatrices and permutation-closed sequent models whose collapse is
//! downward closed.

use std::collections::BTreeSet;

use super::SemanticsError;
use crate::multiset::Multiset;
use crate::semantics::algebra::FiniteAlgebra;
use crate::semantics::downset::MultisetDownset;
use crate::semantics::hypermatrix::Hypermatrix;
use crate::structures::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequentModel {
    pub algebra: FiniteAlgebra,
    pub seqs: BTreeSet<Vec<usize>>,
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All distinct orderings of a multiset's occurrences.
fn orderings(m: &Multiset<usize>) -> Vec<Vec<usize>> {
    let mut v: Vec<usize> = m.occurrences().copied().collect();
    let mut out = vec![v.clone()];
    while next_permutation(&mut v) {
        out.push(v.clone());
    }
    out
}

/// Expands every designated multiset to all of its orderings.
pub fn to_sequents(h: &Hypermatrix) -> Result<SequentModel, SemanticsError> {
    let mut seqs = BTreeSet::new();
    for m in h.filter.members()? {
        seqs.extend(orderings(&m));
    }
    Ok(SequentModel { algebra: h.algebra.clone(), seqs })
}

/// Collapses designated sequences to their underlying multisets.
///
/// The report flags sequent models outside the bridge's range: families not
/// closed under permutation, or whose collapse is not downward closed. The
/// returned hypermatrix is generated by the maximal collapsed multisets and
/// is faithful exactly when the report is clean.
pub fn to_multisets(s: &SequentModel) -> (Hypermatrix, ValidationReport) {
    let mut report = ValidationReport::new();
    let multisets: BTreeSet<Multiset<usize>> = s
        .seqs
        .iter()
        .map(|seq| {
            let mut m = Multiset::new();
            for &e in seq {
                m.insert(e);
            }
            m
        })
        .collect();
    for m in &multisets {
        for perm in orderings(m) {
            if !s.seqs.contains(&perm) {
                report.push(
                    "permutation-closed",
                    format!("an ordering of {m} is designated but {perm:?} is not"),
                );
            }
        }
        for e in m.support() {
            let smaller = m.difference(&Multiset::singleton(*e));
            if !multisets.contains(&smaller) {
                report.push("multiset-downset", format!("{m} is designated but {smaller} is not"));
            }
        }
    }
    let h = Hypermatrix { algebra: s.algebra.clone(), filter: MultisetDownset::from_members(&multisets) };
    (h, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::leibniz::{leibniz, reduce_model};

    fn ms(elems: &[usize]) -> Multiset<usize> {
        let mut m = Multiset::new();
        for &e in elems {
            m.insert(e);
        }
        m
    }

    fn model() -> Hypermatrix {
        Hypermatrix {
            algebra: FiniteAlgebra::two_constants(),
            filter: MultisetDownset::new(vec![ms(&[0, 1]), ms(&[0, 0])]),
        }
    }

    #[test]
    fn expansion_lists_every_ordering() {
        let s = to_sequents(&model()).unwrap();
        let expect: BTreeSet<Vec<usize>> =
            [vec![], vec![0], vec![1], vec![0, 1], vec![1, 0], vec![0, 0]].into();
        assert_eq!(s.seqs, expect);
    }

    #[test]
    fn the_bridge_round_trips() {
        let h = model();
        let (back, report) = to_multisets(&to_sequents(&h).unwrap());
        assert!(report.is_ok(), "{report}");
        assert_eq!(back, h);
    }

    #[test]
    fn models_outside_the_range_are_flagged() {
        let alg = FiniteAlgebra::two_constants();
        let skewed = SequentModel {
            algebra: alg.clone(),
            seqs: [vec![], vec![0], vec![1], vec![0, 1]].into(),
        };
        let (_, report) = to_multisets(&skewed);
        assert!(report.violations.iter().any(|v| v.law == "permutation-closed"), "{report}");

        let gappy = SequentModel { algebra: alg, seqs: [vec![0, 1], vec![1, 0]].into() };
        let (_, report) = to_multisets(&gappy);
        assert!(report.violations.iter().any(|v| v.law == "multiset-downset"), "{report}");
    }

    #[test]
    fn reduction_commutes_with_the_bridge() {
        // Collapsing indistinguishable elements first and expanding to
        // sequences gives the same family as expanding first and mapping
        // every sequence through the congruence.
        let h = Hypermatrix {
            algebra: FiniteAlgebra {
                name: "P3".to_string(),
                elems: vec!["a".into(), "b".into(), "c".into()],
                meet: None,
                join: None,
                fuse: None,
                imp: None,
                one: None,
                consts: Default::default(),
            },
            filter: MultisetDownset::new(vec![ms(&[0, 1]), ms(&[0, 0]), ms(&[1, 1])]),
        };
        let theta = leibniz(&h).unwrap().classes;
        assert_eq!(theta, vec![0, 0, 1], "the congruence should be nontrivial");
        let (reduced, _) = reduce_model(&h).unwrap();
        let direct = to_sequents(&reduced).unwrap().seqs;
        let mapped: BTreeSet<Vec<usize>> = to_sequents(&h)
            .unwrap()
            .seqs
            .into_iter()
            .map(|seq| seq.into_iter().map(|e| theta[e]).collect())
            .collect();
        assert_eq!(direct, mapped);
    }
}
