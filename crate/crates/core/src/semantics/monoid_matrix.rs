//! Matrices whose designated values live in a finite pomonoid.
//!
//! A monoid matrix maps element multisets into a pomonoid `D` by summing
//! per-element values, and designates the multisets whose value falls in a
//! downward-closed set `G`. Taking the value-preimage of `G` turns such a
//! matrix into a hypermatrix; conversely a hypermatrix embeds as a matrix
//! over the pomonoid of size-capped carrier multisets (with one absorbing
//! top standing for everything larger). `roundtrip_check` verifies both
//! directions on an instance, including the one caveat of the value-side
//! identity: it can only recover the part of `G` lying below values the
//! carrier actually reaches.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use super::{MAX_MEMBERS, SemanticsError};
use crate::multiset::Multiset;
use crate::semantics::algebra::FiniteAlgebra;
use crate::semantics::downset::{MultisetDownset, multisets_up_to};
use crate::semantics::hypermatrix::Hypermatrix;
use crate::structures::{FinitePomonoid, ValidationReport};

/// Cap on the carrier of the bounded-multiset pomonoid built by `mh_of`.
const MAX_VALUE_CARRIER: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidMatrix {
    pub algebra: FiniteAlgebra,
    /// The value pomonoid D.
    pub des: FinitePomonoid,
    /// Designated values, downward closed in D.
    pub designated: BTreeSet<usize>,
    /// Value of each carrier element; a multiset maps to the sum of the
    /// values of its occurrences.
    pub hom: Vec<usize>,
}

impl MonoidMatrix {
    /// Value of an element multiset.
    pub fn value_of(&self, x: &Multiset<usize>) -> usize {
        let mut acc = self.des.zero;
        for &e in x.occurrences() {
            acc = self.des.plus(acc, self.hom[e]);
        }
        acc
    }

    /// The values actually reachable from carrier multisets: the
    /// sub-monoid of D generated by the per-element values.
    pub fn reachable(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::from([self.des.zero]);
        loop {
            let fresh: Vec<usize> = out
                .iter()
                .flat_map(|&s| self.hom.iter().map(move |&v| self.des.plus(s, v)))
                .filter(|d| !out.contains(d))
                .collect();
            if fresh.is_empty() {
                return out;
            }
            out.extend(fresh);
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = self.des.validate();
        let n = self.des.n();
        if self.hom.len() != self.algebra.n() {
            report.push(
                "hom-range",
                format!("{} carrier elements but {} values", self.algebra.n(), self.hom.len()),
            );
        }
        for (e, &v) in self.hom.iter().enumerate() {
            if v >= n {
                report.push("hom-range", format!("element {e} maps to out-of-range value {v}"));
            }
        }
        for &g in &self.designated {
            if g >= n {
                report.push("designated-range", format!("designated value {g} out of range"));
                continue;
            }
            for d in 0..n {
                if self.des.le(d, g) && !self.designated.contains(&d) {
                    report.push(
                        "designated-downset",
                        format!(
                            "{} is designated but {} below it is not",
                            self.des.elem_name(g),
                            self.des.elem_name(d)
                        ),
                    );
                }
            }
        }
        if !report.is_ok() {
            return report;
        }
        // The extension to multisets is additive by construction and
        // monotone because D is dually integral; re-check both on small
        // multisets as a self-test.
        let small = multisets_up_to(self.algebra.n(), 2);
        for x in &small {
            for y in &small {
                let (fx, fy) = (self.value_of(x), self.value_of(y));
                if self.value_of(&x.sum(y)) != self.des.plus(fx, fy) {
                    report.push_internal("extension-additive", format!("at {x} and {y}"));
                }
                if x.subset_of(y) && !self.des.le(fx, fy) {
                    report.push_internal("extension-monotone", format!("at {x} ≤ {y}"));
                }
            }
        }
        report
    }

    /// The hypermatrix designating the multisets whose value is designated,
    /// enumerated up to `size_bound`. The flag is true when some multiset of
    /// exactly the bound's size is designated — the family may then continue
    /// past the bound and the generators are only a lower approximation.
    pub fn to_hyper(&self, size_bound: usize) -> Result<(Hypermatrix, bool), SemanticsError> {
        let mut members: BTreeSet<Multiset<usize>> = BTreeSet::new();
        let mut flagged = false;
        for x in multisets_up_to(self.algebra.n(), size_bound) {
            if self.designated.contains(&self.value_of(&x)) {
                flagged = flagged || x.size() == BigUint::from(size_bound);
                members.insert(x);
                if members.len() > MAX_MEMBERS {
                    return Err(SemanticsError::SizeGuard {
                        what: "designated preimage".to_string(),
                        got: members.len(),
                        limit: MAX_MEMBERS,
                    });
                }
            }
        }
        let filter = MultisetDownset::from_members(&members);
        Ok((Hypermatrix { algebra: self.algebra.clone(), filter }, flagged))
    }

    /// Pushes the matrix forward along a pomonoid homomorphism `map` from D
    /// into `target`: values compose with the map and the designated set
    /// becomes the downset generated by the image of `G`.
    pub fn push(&self, map: &[usize], target: &FinitePomonoid) -> Result<MonoidMatrix, SemanticsError> {
        let (n, m) = (self.des.n(), target.n());
        if map.len() != n || map.iter().any(|&v| v >= m) {
            return Err(SemanticsError::Precondition("the map must send D into the target carrier".into()));
        }
        if map[self.des.zero] != target.zero {
            return Err(SemanticsError::Precondition("the map must preserve the unit".into()));
        }
        for a in 0..n {
            for b in 0..n {
                if map[self.des.plus(a, b)] != target.plus(map[a], map[b]) {
                    return Err(SemanticsError::Precondition(format!(
                        "the map does not preserve {} + {}",
                        self.des.elem_name(a),
                        self.des.elem_name(b)
                    )));
                }
                if self.des.le(a, b) && !target.le(map[a], map[b]) {
                    return Err(SemanticsError::Precondition(format!(
                        "the map is not monotone at {} ≤ {}",
                        self.des.elem_name(a),
                        self.des.elem_name(b)
                    )));
                }
            }
        }
        let designated: BTreeSet<usize> = (0..m)
            .filter(|&d| self.designated.iter().any(|&g| target.le(d, map[g])))
            .collect();
        Ok(MonoidMatrix {
            algebra: self.algebra.clone(),
            des: target.clone(),
            designated,
            hom: self.hom.iter().map(|&v| map[v]).collect(),
        })
    }
}

/// Embeds a hypermatrix as a monoid matrix: the value pomonoid has one
/// element per carrier multiset of size ≤ `cap` plus an absorbing top for
/// everything larger, an element's value is its singleton, and the
/// designated values are exactly the designated multisets.
pub fn mh_of(h: &Hypermatrix, cap: usize) -> Result<MonoidMatrix, SemanticsError> {
    let cap = cap.max(1);
    if cap < h.filter.max_generator_size() {
        return Err(SemanticsError::Precondition(format!(
            "cap {cap} is below the largest designated multiset ({})",
            h.filter.max_generator_size()
        )));
    }
    let multisets = multisets_up_to(h.algebra.n(), cap);
    let nn = multisets.len() + 1;
    if nn > MAX_VALUE_CARRIER {
        return Err(SemanticsError::SizeGuard {
            what: "bounded-multiset pomonoid".to_string(),
            got: nn,
            limit: MAX_VALUE_CARRIER,
        });
    }
    let index: std::collections::BTreeMap<&Multiset<usize>, usize> =
        multisets.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let top = nn - 1;
    let name_of = |m: &Multiset<usize>| m.map(|&e| h.algebra.elems[e].clone()).to_string();
    let mut elems: Vec<String> = multisets.iter().map(name_of).collect();
    elems.push("top".to_string());
    let mut leq = vec![false; nn * nn];
    let mut add = vec![top; nn * nn];
    for (i, x) in multisets.iter().enumerate() {
        leq[i * nn + top] = true;
        for (j, y) in multisets.iter().enumerate() {
            leq[i * nn + j] = x.subset_of(y);
            if let Some(&k) = index.get(&x.sum(y)) {
                add[i * nn + j] = k;
            }
        }
        add[top * nn + i] = top;
        add[i * nn + top] = top;
    }
    leq[top * nn + top] = true;
    let zero = index[&Multiset::new()];
    let des = FinitePomonoid {
        name: format!("{}♭{cap}", h.algebra.name),
        elems,
        leq,
        add,
        zero,
    };
    let designated: BTreeSet<usize> = h.filter.members()?.iter().map(|m| index[m]).collect();
    let hom = (0..h.algebra.n()).map(|e| index[&Multiset::singleton(e)]).collect();
    Ok(MonoidMatrix { algebra: h.algebra.clone(), des, designated, hom })
}

/// Both directions of the matrix↔hypermatrix correspondence, checked on one
/// instance.
#[derive(Debug, Clone)]
pub struct RoundtripReport {
    /// Re-embedding the derived hypermatrix and taking its preimage again
    /// reproduced the same designated family.
    pub collapse_ok: bool,
    /// The designated set is the downset generated by its reachable part,
    /// so pushing the re-embedded matrix back onto D recovers it exactly.
    pub value_side_ok: bool,
    /// A designated value not below any reachable designated value.
    pub value_witness: Option<String>,
    /// Some enumeration hit its size bound; verdicts are then only as good
    /// as the bound.
    pub truncation_flagged: bool,
    pub report: ValidationReport,
}

pub fn roundtrip_check(
    m: &MonoidMatrix,
    cap: usize,
    size_bound: usize,
) -> Result<RoundtripReport, SemanticsError> {
    let mut report = m.validate();

    let (h, flag_out) = m.to_hyper(size_bound)?;
    let embedded = mh_of(&h, cap.max(h.filter.max_generator_size()))?;
    report.merge(embedded.validate());
    let (h2, flag_back) = embedded.to_hyper(size_bound)?;
    let collapse_ok = h2.filter == h.filter;

    let reachable = m.reachable();
    let down_of_reachable: BTreeSet<usize> = (0..m.des.n())
        .filter(|&d| {
            m.designated.iter().any(|&g| reachable.contains(&g) && m.des.le(d, g))
        })
        .collect();
    let value_side_ok = down_of_reachable == m.designated;
    let value_witness = m
        .designated
        .difference(&down_of_reachable)
        .next()
        .map(|&d| m.des.elem_name(d).to_string());

    Ok(RoundtripReport {
        collapse_ok,
        value_side_ok,
        value_witness,
        truncation_flagged: flag_out || flag_back,
        report,
    })
}
