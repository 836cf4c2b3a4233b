//! Finite multisets with arbitrary-precision multiplicities.
//!
//! Under the pointwise order, multiset sum, the empty multiset, pointwise
//! max/min and truncated difference, the finite multisets over any element
//! type form an ordered commutative monoid whose unit is the least element,
//! with binary joins and meets and a residual for the sum.  Everything else
//! in this crate is built on that structure.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A finite multiset over `E`, stored as a map from element to multiplicity.
///
/// Invariant: stored multiplicities are strictly positive, so the map form is
/// canonical and the derived `Eq`/`Hash` agree with multiset equality.  The
/// derived `Ord` is the lexicographic order on the canonical entry list — an
/// arbitrary total order used for deterministic output, not to be confused
/// with the containment order [`Multiset::subset_of`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct Multiset<E: Ord> {
    entries: BTreeMap<E, BigUint>,
}

impl<E: Ord> Multiset<E> {
    /// The empty multiset.
    pub fn new() -> Self {
        Multiset { entries: BTreeMap::new() }
    }

    /// The multiset containing `e` exactly once.
    pub fn singleton(e: E) -> Self {
        let mut m = Self::new();
        m.insert(e);
        m
    }

    /// Builds a multiset from `(element, multiplicity)` pairs; zero
    /// multiplicities are dropped, repeated elements accumulate.
    pub fn from_counts(pairs: impl IntoIterator<Item = (E, BigUint)>) -> Self {
        let mut m = Self::new();
        for (e, n) in pairs {
            m.insert_many(e, n);
        }
        m
    }

    /// Adds one occurrence of `e`.
    pub fn insert(&mut self, e: E) {
        self.insert_many(e, BigUint::one());
    }

    /// Adds `n` occurrences of `e` (a no-op when `n` is zero).
    pub fn insert_many(&mut self, e: E, n: BigUint) {
        if !n.is_zero() {
            *self.entries.entry(e).or_insert_with(BigUint::zero) += n;
        }
    }

    /// Multiplicity of `e` (zero when absent).
    pub fn count(&self, e: &E) -> BigUint {
        self.entries.get(e).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn contains(&self, e: &E) -> bool {
        self.entries.contains_key(e)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total number of occurrences.
    pub fn size(&self) -> BigUint {
        self.entries.values().fold(BigUint::zero(), |a, n| a + n)
    }

    /// Number of distinct elements.
    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    /// Entries as `(element, multiplicity)` pairs in element order.
    pub fn iter(&self) -> impl Iterator<Item = (&E, &BigUint)> {
        self.entries.iter()
    }

    /// The underlying set of elements occurring at least once.
    pub fn support(&self) -> impl Iterator<Item = &E> {
        self.entries.keys()
    }

    /// Every occurrence in element order, elements repeated per multiplicity.
    ///
    /// Panics if a single multiplicity does not fit in `usize`; callers that
    /// expand occurrences only ever deal with human-scale multisets.
    pub fn occurrences(&self) -> impl Iterator<Item = &E> {
        self.entries.iter().flat_map(|(e, n)| {
            let n: usize = n.try_into().expect("multiplicity exceeds addressable size");
            std::iter::repeat_n(e, n)
        })
    }
}

impl<E: Ord + Clone> Multiset<E> {
    /// Multiset sum: multiplicities add.
    pub fn sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, n) in other.iter() {
            out.insert_many(e.clone(), n.clone());
        }
        out
    }

    /// `n` copies of this multiset summed together.
    pub fn scaled(&self, n: &BigUint) -> Self {
        if n.is_zero() {
            return Self::new();
        }
        Multiset { entries: self.entries.iter().map(|(e, k)| (e.clone(), k * n)).collect() }
    }

    /// Containment: every multiplicity here is at most the one in `other`.
    pub fn subset_of(&self, other: &Self) -> bool {
        self.iter().all(|(e, n)| *n <= other.count(e))
    }

    /// Pointwise maximum of multiplicities (least upper bound).
    pub fn join(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, n) in other.iter() {
            let cur = out.count(e);
            if *n > cur {
                out.entries.insert(e.clone(), n.clone());
            }
        }
        out
    }

    /// Pointwise minimum of multiplicities (greatest lower bound).
    pub fn meet(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (e, n) in self.iter() {
            let m = other.count(e);
            out.insert_many(e.clone(), n.clone().min(m));
        }
        out
    }

    /// Truncated difference: multiplicities subtract, stopping at zero.
    ///
    /// This is the residual of the sum: `x.difference(y) ⊆ z` exactly when
    /// `x ⊆ z.sum(y)`.
    pub fn difference(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (e, n) in self.iter() {
            let m = other.count(e);
            if *n > m {
                out.entries.insert(e.clone(), n - m);
            }
        }
        out
    }
}

impl<E: Ord> Multiset<E> {
    /// Applies `f` to every occurrence; images that collide accumulate.
    ///
    /// This is the unique monoid-map extension of `f` to multisets: it
    /// preserves sums and the empty multiset and is monotone.
    pub fn map<F: Ord>(&self, mut f: impl FnMut(&E) -> F) -> Multiset<F> {
        let mut out = Multiset::new();
        for (e, n) in self.iter() {
            out.insert_many(f(e), n.clone());
        }
        out
    }
}

impl<E: Ord> FromIterator<E> for Multiset<E> {
    fn from_iter<I: IntoIterator<Item = E>>(it: I) -> Self {
        let mut m = Self::new();
        for e in it {
            m.insert(e);
        }
        m
    }
}

impl<'a, E: Ord> IntoIterator for &'a Multiset<E> {
    type Item = (&'a E, &'a BigUint);
    type IntoIter = std::collections::btree_map::Iter<'a, E, BigUint>;
    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

/// `[a, a, b]`: occurrences in element order.  The same notation is accepted
/// by the parsers in [`crate::formula`] and [`crate::io`].
impl<E: Ord + fmt::Display> fmt::Display for Multiset<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.occurrences().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}
