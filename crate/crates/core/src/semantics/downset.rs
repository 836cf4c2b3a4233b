//! Downward-closed families of multisets, kept as an antichain of maximal
//! generators.
//!
//! A family is the set of all sub-multisets of its generators, so it is
//! downward closed by construction. The constructor normalizes: generators
//! below another generator are dropped and the rest are sorted, making
//! derived equality semantic equality. The empty generator list denotes the
//! empty family (which is vacuously downward closed); the family `{∅}` has
//! the single generator ∅.

use std::collections::BTreeSet;

use num_traits::ToPrimitive;

use super::{MAX_MEMBERS, SemanticsError};
use crate::multiset::Multiset;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MultisetDownset {
    gens: Vec<Multiset<usize>>,
}

impl MultisetDownset {
    pub fn new(gens: Vec<Multiset<usize>>) -> Self {
        let mut keep: Vec<Multiset<usize>> = Vec::new();
        for g in &gens {
            if gens.iter().any(|h| g != h && g.subset_of(h)) || keep.contains(g) {
                continue;
            }
            keep.push(g.clone());
        }
        keep.sort();
        MultisetDownset { gens: keep }
    }

    /// The family with no members at all.
    pub fn empty_family() -> Self {
        MultisetDownset { gens: Vec::new() }
    }

    /// The maximal members, pairwise incomparable, sorted.
    pub fn generators(&self) -> &[Multiset<usize>] {
        &self.gens
    }

    pub fn is_empty_family(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, x: &Multiset<usize>) -> bool {
        self.gens.iter().any(|g| x.subset_of(g))
    }

    /// Largest element mentioned by any generator, used for range checks.
    pub fn max_element(&self) -> Option<usize> {
        self.gens.iter().flat_map(|g| g.support().copied()).max()
    }

    /// Size of the largest generator.
    pub fn max_generator_size(&self) -> usize {
        self.gens
            .iter()
            .map(|g| g.size().to_usize().unwrap_or(usize::MAX))
            .max()
            .unwrap_or(0)
    }

    /// Every member, i.e. every sub-multiset of a generator.
    pub fn members(&self) -> Result<BTreeSet<Multiset<usize>>, SemanticsError> {
        let mut out = BTreeSet::new();
        for g in &self.gens {
            let entries: Vec<(usize, usize)> = g
                .iter()
                .map(|(e, c)| (*e, c.to_usize().unwrap_or(usize::MAX)))
                .collect();
            let mut take = vec![0usize; entries.len()];
            loop {
                let mut m = Multiset::new();
                for ((e, _), k) in entries.iter().zip(&take) {
                    m.insert_many(*e, (*k).into());
                }
                out.insert(m);
                if out.len() > MAX_MEMBERS {
                    return Err(SemanticsError::SizeGuard {
                        what: "downset member enumeration".to_string(),
                        got: out.len(),
                        limit: MAX_MEMBERS,
                    });
                }
                let mut i = entries.len();
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    take[i] += 1;
                    if take[i] <= entries[i].1 {
                        break;
                    }
                    take[i] = 0;
                }
                if take.iter().all(|&k| k == 0) {
                    break;
                }
            }
        }
        Ok(out)
    }

    /// Image family under an element map; the image of a downset under a
    /// carrier map is generated by the images of the generators.
    pub fn map(&self, f: impl Fn(usize) -> usize) -> MultisetDownset {
        MultisetDownset::new(self.gens.iter().map(|g| g.map(|e| f(*e))).collect())
    }

    /// The downset generated by the maximal members of an explicit family.
    /// Faithful exactly when the family is downward closed.
    pub fn from_members(members: &BTreeSet<Multiset<usize>>) -> MultisetDownset {
        let maximal: Vec<Multiset<usize>> = members
            .iter()
            .filter(|m| !members.iter().any(|o| *m != o && m.subset_of(o)))
            .cloned()
            .collect();
        MultisetDownset::new(maximal)
    }
}

/// All multisets of size `k` drawn from `elems` (with repetition), in a
/// deterministic order.
pub(crate) fn multisets_of_size(elems: &[usize], k: usize) -> Vec<Multiset<usize>> {
    let mut out = Vec::new();
    fn go(elems: &[usize], k: usize, acc: &mut Multiset<usize>, out: &mut Vec<Multiset<usize>>) {
        if k == 0 {
            out.push(acc.clone());
            return;
        }
        let Some((&e, rest)) = elems.split_first() else { return };
        for take in (0..=k).rev() {
            for _ in 0..take {
                acc.insert(e);
            }
            go(rest, k - take, acc, out);
            *acc = acc.difference(&Multiset::from_counts([(e, take.into())]));
        }
    }
    go(elems, k, &mut Multiset::new(), &mut out);
    out
}

/// All multisets over the carrier `0..n` of size at most `bound`.
pub(crate) fn multisets_up_to(n: usize, bound: usize) -> Vec<Multiset<usize>> {
    let elems: Vec<usize> = (0..n).collect();
    (0..=bound).flat_map(|k| multisets_of_size(&elems, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(elems: &[usize]) -> Multiset<usize> {
        let mut m = Multiset::new();
        for &e in elems {
            m.insert(e);
        }
        m
    }

    #[test]
    fn construction_normalizes_to_a_sorted_antichain() {
        let d = MultisetDownset::new(vec![ms(&[0, 1]), ms(&[0]), ms(&[2, 2]), ms(&[0, 1])]);
        assert_eq!(d.generators(), &[ms(&[0, 1]), ms(&[2, 2])]);
        assert_eq!(d, MultisetDownset::new(vec![ms(&[2, 2]), ms(&[1, 0])]));
    }

    #[test]
    fn membership_is_inclusion_below_some_generator() {
        let d = MultisetDownset::new(vec![ms(&[0, 1]), ms(&[2, 2])]);
        assert!(d.contains(&ms(&[])));
        assert!(d.contains(&ms(&[1])));
        assert!(d.contains(&ms(&[2, 2])));
        assert!(!d.contains(&ms(&[0, 2])));
        assert!(!d.contains(&ms(&[2, 2, 2])));

        assert!(!MultisetDownset::empty_family().contains(&ms(&[])));
        assert!(MultisetDownset::new(vec![ms(&[])]).contains(&ms(&[])));
    }

    #[test]
    fn members_enumerates_every_submultiset_once() {
        let d = MultisetDownset::new(vec![ms(&[0, 1]), ms(&[2, 2])]);
        let members = d.members().unwrap();
        // {∅,[0],[1],[0 1]} ∪ {∅,[2],[2 2]} with ∅ shared.
        assert_eq!(members.len(), 6);
        assert!(members.iter().all(|m| d.contains(m)));
        assert!(MultisetDownset::empty_family().members().unwrap().is_empty());
    }

    #[test]
    fn from_members_round_trips_downward_closed_families() {
        let d = MultisetDownset::new(vec![ms(&[0, 0, 1]), ms(&[1, 2])]);
        assert_eq!(MultisetDownset::from_members(&d.members().unwrap()), d);
    }
}
