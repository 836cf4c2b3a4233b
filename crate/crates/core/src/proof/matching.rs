//! One-way syntactic matching of schema formulas against concrete formulas.
//!
//! Matching instantiates schema variables only; the concrete side is never
//! decomposed into a pattern. Multiset matching enumerates every way of
//! pairing pattern occurrences with target occurrences and returns the
//! resulting substitutions sorted and deduplicated, so callers that pick the
//! first match are deterministic.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use crate::formula::Formula;
use crate::formula::Substitution;
use crate::multiset::Multiset;

type Binding = BTreeMap<String, Formula>;

/// Extends `bind` so that `pattern` under it becomes exactly `target`.
/// Returns false (leaving `bind` possibly extended) when impossible; callers
/// branch on a cloned binding.
pub fn match_formula(pattern: &Formula, target: &Formula, bind: &mut Binding) -> bool {
    match (pattern, target) {
        (Formula::Var(v), t) => match bind.get(v) {
            Some(prev) => prev == t,
            None => {
                bind.insert(v.clone(), t.clone());
                true
            }
        },
        (Formula::One, Formula::One) => true,
        (Formula::Meet(a, b), Formula::Meet(c, d))
        | (Formula::Join(a, b), Formula::Join(c, d))
        | (Formula::Fusion(a, b), Formula::Fusion(c, d))
        | (Formula::Imp(a, b), Formula::Imp(c, d)) => {
            match_formula(a, c, bind) && match_formula(b, d, bind)
        }
        _ => false,
    }
}

/// Target multiset flattened to (formula, available-count) entries. Counts are
/// clamped to `clamp`: one pattern can never consume more occurrences of a
/// single formula than it has occurrences itself.
fn entries(target: &Multiset<Formula>, clamp: usize) -> Vec<(Formula, usize)> {
    target
        .iter()
        .map(|(f, n)| (f.clone(), n.to_usize().unwrap_or(usize::MAX).min(clamp)))
        .collect()
}

fn search(
    pats: &[Formula],
    avail: &mut Vec<(Formula, usize)>,
    bind: &Binding,
    exact: bool,
    consumed: &mut Vec<Formula>,
    out: &mut Vec<(Binding, Multiset<Formula>)>,
) {
    let Some((pat, rest)) = pats.split_first() else {
        if !exact || avail.iter().all(|(_, n)| *n == 0) {
            let mut psi = Multiset::new();
            for f in consumed.iter() {
                psi.insert(f.clone());
            }
            out.push((bind.clone(), psi));
        }
        return;
    };
    for i in 0..avail.len() {
        if avail[i].1 == 0 {
            continue;
        }
        let mut next = bind.clone();
        if !match_formula(pat, &avail[i].0.clone(), &mut next) {
            continue;
        }
        avail[i].1 -= 1;
        consumed.push(avail[i].0.clone());
        search(rest, avail, &next, exact, consumed, out);
        consumed.pop();
        avail[i].1 += 1;
    }
}

fn run(
    patterns: &Multiset<Formula>,
    target: &Multiset<Formula>,
    bind: &Binding,
    exact: bool,
) -> Vec<(Binding, Multiset<Formula>)> {
    if exact && patterns.size() != target.size() {
        return Vec::new();
    }
    let pats: Vec<Formula> = patterns.occurrences().cloned().collect();
    let clamp = if exact { usize::MAX } else { pats.len() };
    let mut avail = entries(target, clamp);
    let mut out = Vec::new();
    search(&pats, &mut avail, bind, exact, &mut Vec::new(), &mut out);
    out.sort();
    out.dedup();
    out
}

fn to_subst(bind: Binding) -> Substitution {
    Substitution::from_pairs(bind)
}

/// All substitutions σ with σ(patterns) equal to `target` as a multiset.
pub fn match_multiset_exact(
    patterns: &Multiset<Formula>,
    target: &Multiset<Formula>,
) -> Vec<Substitution> {
    run(patterns, target, &Binding::new(), true)
        .into_iter()
        .map(|(b, _)| to_subst(b))
        .collect()
}

/// All ways of matching `patterns` against a sub-multiset of `target`; each
/// result is the substitution together with the matched sub-multiset Ψ.
pub fn match_multiset_sub(
    patterns: &Multiset<Formula>,
    target: &Multiset<Formula>,
) -> Vec<(Substitution, Multiset<Formula>)> {
    let mut out: Vec<(Substitution, Multiset<Formula>)> = run(patterns, target, &Binding::new(), false)
        .into_iter()
        .map(|(b, psi)| (to_subst(b), psi))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// A substitution turning `premises |> conclusions` of a schema into exactly
/// `prem_target |> concl_target`, if one exists. Schema variables missing
/// from the schema entirely stay unbound (the identity fills them in).
pub fn match_consecution_exact(
    premises: &Multiset<Formula>,
    conclusions: &Multiset<Formula>,
    prem_target: &Multiset<Formula>,
    concl_target: &Multiset<Formula>,
) -> Option<Substitution> {
    for (bind, _) in run(conclusions, concl_target, &Binding::new(), true) {
        if let Some((full, _)) = run(premises, prem_target, &bind, true).into_iter().next() {
            return Some(to_subst(full));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, parse_formula_multiset};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn m(s: &str) -> Multiset<Formula> {
        parse_formula_multiset(s).unwrap()
    }

    #[test]
    fn formula_matching_is_one_way() {
        let mut bind = Binding::new();
        assert!(match_formula(&f("p->q"), &f("(a&b)->(a&b)"), &mut bind));
        assert_eq!(bind["p"], f("a&b"));
        assert_eq!(bind["q"], f("a&b"));

        let mut bind = Binding::new();
        assert!(!match_formula(&f("p->p"), &f("a->b"), &mut bind));
        assert!(!match_formula(&f("p&q"), &f("a|b"), &mut Binding::new()));
        // A concrete variable only matches patterns variable-for-variable.
        assert!(!match_formula(&f("p*q"), &f("a"), &mut Binding::new()));
    }

    #[test]
    fn exact_multiset_matching_accounts_for_multiplicity() {
        let subs = match_multiset_exact(&m("[p, p->q]"), &m("[a, a->b]"));
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].image_of("p"), f("a"));
        assert_eq!(subs[0].image_of("q"), f("b"));

        assert!(match_multiset_exact(&m("[p]"), &m("[a, a]")).is_empty());
        // Two interchangeable patterns yield one deduplicated substitution.
        assert_eq!(match_multiset_exact(&m("[p, q]"), &m("[a, a]")).len(), 1);
        // But distinct targets can be assigned either way round.
        assert_eq!(match_multiset_exact(&m("[p, q]"), &m("[a, b]")).len(), 2);
    }

    #[test]
    fn sub_multiset_matching_reports_the_matched_part() {
        let hits = match_multiset_sub(&m("[p, p->q]"), &m("[a, a->b, c]"));
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].1, m("[a, a->b]"));

        // [p] embeds into [a, a->b, c] in three ways.
        assert_eq!(match_multiset_sub(&m("[p]"), &m("[a, a->b, c]")).len(), 3);
    }

    #[test]
    fn consecution_matching_links_premise_and_conclusion_variables() {
        let s = match_consecution_exact(&m("[p, p->q]"), &m("[q]"), &m("[a, a->b]"), &m("[b]"));
        assert!(s.is_some());
        assert!(
            match_consecution_exact(&m("[p, p->q]"), &m("[q]"), &m("[a, a->b]"), &m("[a]"))
                .is_none()
        );
    }
}
