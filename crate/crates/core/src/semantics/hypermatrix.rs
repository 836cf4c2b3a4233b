//! Hypermatrix models and the consequence relations they induce.
//!
//! A hypermatrix pairs a finite algebra with a downward-closed family of
//! designated element multisets. The contextual relation asks that in every
//! valuation, every context multiset designating the premise image also
//! designates the conclusion image; the plain relation drops the context.
//! Contexts only matter when they designate something, and every such
//! context lies below a generator of the family, so quantifying contexts
//! over the family's members is exhaustive.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigUint;

use super::{MAX_MEMBERS, SemanticsError};
use crate::formula::Consecution;
use crate::multiset::Multiset;
use crate::proof::system::AxiomaticSystem;
use crate::semantics::algebra::FiniteAlgebra;
use crate::semantics::downset::MultisetDownset;
use crate::structures::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypermatrix {
    pub algebra: FiniteAlgebra,
    pub filter: MultisetDownset,
}

impl Hypermatrix {
    /// Structural sanity: every designated multiset mentions only carrier
    /// elements. Downward closure holds by construction of the family.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        if let Some(max) = self.filter.max_element() {
            if max >= self.algebra.n() {
                report.push(
                    "filter-range",
                    format!("designated element {max} outside the {}-element carrier", self.algebra.n()),
                );
            }
        }
        report
    }
}

/// Which of the two induced relations to decide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Quantifies over contexts as well as valuations.
    Contextual,
    /// Valuations only.
    Plain,
}

/// Outcome of a consequence check, with the first counterexample in scan
/// order when the relation fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperVerdict {
    pub holds: bool,
    pub valuation: Option<BTreeMap<String, usize>>,
    pub context: Option<Multiset<usize>>,
}

impl HyperVerdict {
    fn yes() -> Self {
        HyperVerdict { holds: true, valuation: None, context: None }
    }
}

/// Decides Γ ⊨ Δ (contextual) or Γ ⊨′ Δ (plain) in one hypermatrix.
pub fn hyper_consequence(
    h: &Hypermatrix,
    c: &Consecution,
    mode: Mode,
) -> Result<HyperVerdict, SemanticsError> {
    let contexts: Vec<Multiset<usize>> = match mode {
        Mode::Contextual => h.filter.members()?.into_iter().collect(),
        Mode::Plain => vec![Multiset::new()],
    };
    for val in h.algebra.valuations(&h.algebra.free_vars(c))? {
        let fg = h.algebra.eval_multiset(&c.premises, &val)?;
        let fd = h.algebra.eval_multiset(&c.conclusions, &val)?;
        for ctx in &contexts {
            if h.filter.contains(&ctx.sum(&fg)) && !h.filter.contains(&ctx.sum(&fd)) {
                return Ok(HyperVerdict {
                    holds: false,
                    valuation: Some(val),
                    context: match mode {
                        Mode::Contextual => Some(ctx.clone()),
                        Mode::Plain => None,
                    },
                });
            }
        }
    }
    Ok(HyperVerdict::yes())
}

/// Size caps for filter generation.
#[derive(Debug, Clone, Copy)]
pub struct GenBounds {
    /// Multisets larger than this are not added; doing so sets `truncated`.
    pub max_size: usize,
    /// Hard cap on the number of members (exceeding it is an error).
    pub max_members: usize,
}

impl Default for GenBounds {
    fn default() -> Self {
        GenBounds { max_size: 8, max_members: MAX_MEMBERS }
    }
}

/// The least family containing the seed, downward closed and closed under
/// the system's schema instances, cut off at the size cap.
#[derive(Debug, Clone)]
pub struct GeneratedFilter {
    pub members: BTreeSet<Multiset<usize>>,
    /// True when some member was dropped for exceeding the size cap; the
    /// reported family is then only an under-approximation.
    pub truncated: bool,
    /// Self-check of the closure properties, run only when untruncated.
    pub report: ValidationReport,
}

impl GeneratedFilter {
    /// The family as a generator antichain (faithful: the member set is
    /// downward closed even when truncated).
    pub fn downset(&self) -> MultisetDownset {
        MultisetDownset::from_members(&self.members)
    }
}

/// Closes `seed` under sub-multisets and under every valuation instance of
/// the system's schemata, applied in every context: a member containing an
/// instance's premise image may swap it for the conclusion image.
pub fn filter_generate(
    sys: &AxiomaticSystem,
    alg: &FiniteAlgebra,
    seed: &[Multiset<usize>],
    bounds: &GenBounds,
) -> Result<GeneratedFilter, SemanticsError> {
    for s in seed {
        if let Some(&bad) = s.support().find(|&&e| e >= alg.n()) {
            return Err(SemanticsError::Precondition(format!(
                "seed mentions element {bad} outside the {}-element carrier",
                alg.n()
            )));
        }
    }

    // Value-level schema instances, deduplicated.
    let mut instances: BTreeSet<(Multiset<usize>, Multiset<usize>)> = BTreeSet::new();
    for schema in &sys.schemata {
        let vars: BTreeSet<String> =
            schema.vars().into_iter().filter(|v| !alg.consts.contains_key(v)).collect();
        for val in alg.valuations(&vars)? {
            instances.insert((
                alg.eval_multiset(&schema.premises, &val)?,
                alg.eval_multiset(&schema.conclusions, &val)?,
            ));
        }
    }

    let cap = BigUint::from(bounds.max_size);
    let mut members: BTreeSet<Multiset<usize>> = BTreeSet::new();
    let mut queue: VecDeque<Multiset<usize>> = VecDeque::new();
    let mut truncated = false;

    let add = |m: Multiset<usize>,
                   members: &mut BTreeSet<Multiset<usize>>,
                   queue: &mut VecDeque<Multiset<usize>>,
                   truncated: &mut bool|
     -> Result<(), SemanticsError> {
        if m.size() > cap {
            *truncated = true;
            return Ok(());
        }
        if members.contains(&m) {
            return Ok(());
        }
        // Keep the family downward closed: every sub-multiset joins too.
        for sub in MultisetDownset::new(vec![m]).members()? {
            if members.insert(sub.clone()) {
                if members.len() > bounds.max_members {
                    return Err(SemanticsError::SizeGuard {
                        what: "generated filter".to_string(),
                        got: members.len(),
                        limit: bounds.max_members,
                    });
                }
                queue.push_back(sub);
            }
        }
        Ok(())
    };

    for s in seed {
        add(s.clone(), &mut members, &mut queue, &mut truncated)?;
    }
    while let Some(x) = queue.pop_front() {
        for (p, c) in &instances {
            if p.subset_of(&x) {
                add(x.difference(p).sum(c), &mut members, &mut queue, &mut truncated)?;
            }
        }
    }

    let mut report = ValidationReport::new();
    if !truncated {
        for x in &members {
            for (p, c) in &instances {
                if p.subset_of(x) && !members.contains(&x.difference(p).sum(c)) {
                    report.push_internal(
                        "filter-closure",
                        format!("member {x} is not closed under an instance {p} to {c}"),
                    );
                }
            }
        }
    }
    Ok(GeneratedFilter { members, truncated, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_consecution;
    use crate::proof::system::load_system;

    fn ms(elems: &[usize]) -> Multiset<usize> {
        let mut m = Multiset::new();
        for &e in elems {
            m.insert(e);
        }
        m
    }

    /// Two named constants, no operations, designated family
    /// {∅, [0], [1], [0 1]}.
    fn two_constant_model() -> Hypermatrix {
        Hypermatrix {
            algebra: FiniteAlgebra::two_constants(),
            filter: MultisetDownset::new(vec![ms(&[0, 1])]),
        }
    }

    #[test]
    fn plain_and_contextual_disagree_on_the_constant_model() {
        let h = two_constant_model();
        assert!(h.validate().is_ok());
        let single = parse_consecution("[c0] |> [c1]").unwrap();
        let double = parse_consecution("[c0, c1] |> [c1, c1]").unwrap();

        assert!(hyper_consequence(&h, &single, Mode::Plain).unwrap().holds);
        assert!(!hyper_consequence(&h, &double, Mode::Plain).unwrap().holds);

        let v = hyper_consequence(&h, &single, Mode::Contextual).unwrap();
        assert!(!v.holds);
        assert_eq!(v.context, Some(ms(&[1])));
    }

    #[test]
    fn contexts_can_refute_what_plain_validation_accepts() {
        let h = Hypermatrix {
            algebra: FiniteAlgebra::luk_chain(2),
            filter: MultisetDownset::new(vec![ms(&[1, 1])]),
        };
        let c = parse_consecution("[p] |> [p, p]").unwrap();
        assert!(hyper_consequence(&h, &c, Mode::Plain).unwrap().holds);
        let v = hyper_consequence(&h, &c, Mode::Contextual).unwrap();
        assert!(!v.holds);
        assert_eq!(v.valuation.unwrap()[&"p".to_string()], 1);
        assert_eq!(v.context, Some(ms(&[1])));
    }

    #[test]
    fn range_violations_are_reported() {
        let h = Hypermatrix {
            algebra: FiniteAlgebra::luk_chain(2),
            filter: MultisetDownset::new(vec![ms(&[3])]),
        };
        assert!(h.validate().violations.iter().any(|v| v.law == "filter-range"));
    }

    #[test]
    fn detachment_only_generation_reaches_a_fixpoint() {
        let sys = load_system("rule MP: [p, p->q] |> [q]").unwrap();
        let alg = FiniteAlgebra::luk_chain(2);
        let g = filter_generate(&sys, &alg, &[ms(&[0, 1])], &GenBounds::default()).unwrap();
        assert!(!g.truncated);
        assert!(g.report.is_ok(), "{}", g.report);
        let expect: BTreeSet<_> = [ms(&[]), ms(&[0]), ms(&[1]), ms(&[0, 1])].into();
        assert_eq!(g.members, expect);
        assert_eq!(g.downset(), MultisetDownset::new(vec![ms(&[0, 1])]));
    }

    #[test]
    fn axiom_insertion_grows_until_the_cap() {
        let sys = load_system("axiom One: [] |> [1]").unwrap();
        let alg = FiniteAlgebra::luk_chain(2);
        let bounds = GenBounds { max_size: 8, ..GenBounds::default() };
        let g = filter_generate(&sys, &alg, &[ms(&[])], &bounds).unwrap();
        assert!(g.truncated);
        // ∅, [1], [1 1], …, [1 × 8].
        assert_eq!(g.members.len(), 9);
        assert!(g.members.iter().all(|m| m.support().all(|&e| e == 1)));
    }

    #[test]
    fn empty_seed_generates_the_empty_family() {
        let sys = load_system("axiom One: [] |> [1]").unwrap();
        let alg = FiniteAlgebra::luk_chain(2);
        let g = filter_generate(&sys, &alg, &[], &GenBounds::default()).unwrap();
        assert!(g.members.is_empty() && !g.truncated);
        assert!(filter_generate(&sys, &alg, &[ms(&[7])], &GenBounds::default()).is_err());
    }
}
