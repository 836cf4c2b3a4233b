//! Moving between linear derivations and tree proofs.
//!
//! For single-conclusion systems the two proof shapes carry the same
//! information, split differently: a derivation interleaves several
//! arguments in one multiset thread, a tree isolates the history of one
//! conclusion.  [`split_derivation`] peels the history of a chosen
//! conclusion occurrence out of a derivation, leaving a smaller derivation
//! for everything else; [`tree_to_derivation`] flattens a tree back into a
//! thread by deriving each subtree in the context of its siblings.
//!
//! The split works on *occurrences*: replaying the derivation while giving
//! every formula occurrence an identity, each step consumes the earliest
//! matching occurrences and produces one new one.  Every occurrence then
//! has a unique producer and at most one consumer, so the producing
//! history of the chosen conclusion is a tree, and the steps outside that
//! history still replay verbatim once the history's occurrences are
//! removed.

use num_traits::ToPrimitive;

use crate::formula::{Consecution, Formula};
use crate::multiset::Multiset;
use crate::proof::ProofError;
use crate::proof::derivation::{Derivation, StepJust, check_derivation, concat, with_context};
use crate::proof::matching::{match_consecution_exact, match_multiset_exact};
use crate::proof::system::AxiomaticSystem;
use crate::proof::tree::{LeafTag, TreeProof, require_single_conclusion};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult {
    /// The history of the chosen conclusion occurrence.
    pub tree: TreeProof,
    /// The premise occurrences the tree consumes.
    pub tree_premises: Multiset<Formula>,
    /// The original derivation with the tree's steps removed.
    pub rest: Derivation,
    /// What the rest still establishes: the untouched premises over the
    /// claimed conclusions minus the chosen occurrence.
    pub rest_claim: Consecution,
}

#[derive(Debug, Clone)]
enum Origin {
    Hyp,
    Step(usize),
}

struct Sim {
    formulas: Vec<Formula>,
    origins: Vec<Origin>,
    /// Occurrence ids each step consumed, in the order of its Ψ.
    consumed: Vec<Vec<usize>>,
    /// The single occurrence id each step produced.
    produced: Vec<usize>,
    /// Occurrence ids alive at the end, in creation order.
    final_state: Vec<usize>,
}

/// Replays an accepted single-conclusion derivation with occurrence
/// identities.
fn simulate(sys: &AxiomaticSystem, d: &Derivation) -> Sim {
    let mut sim = Sim {
        formulas: vec![],
        origins: vec![],
        consumed: vec![],
        produced: vec![],
        final_state: vec![],
    };
    let mut state: Vec<usize> = vec![];
    for f in d.steps[0].occurrences() {
        sim.formulas.push(f.clone());
        sim.origins.push(Origin::Hyp);
        state.push(sim.formulas.len() - 1);
    }
    for (j, just) in d.justs.iter().enumerate() {
        let mut eaten = vec![];
        for f in just.at.occurrences() {
            let pos = state
                .iter()
                .position(|&id| sim.formulas[id] == *f)
                .expect("an accepted derivation embeds Ψ in the previous step");
            eaten.push(state.remove(pos));
        }
        let schema = sys.schema(&just.rule).expect("an accepted derivation cites known schemata");
        let out = just.subst.apply_multiset(&schema.conclusions);
        let f = out.occurrences().next().expect("single-conclusion schemata produce one formula");
        sim.formulas.push(f.clone());
        sim.origins.push(Origin::Step(j));
        state.push(sim.formulas.len() - 1);
        sim.consumed.push(eaten);
        sim.produced.push(sim.formulas.len() - 1);
    }
    sim.final_state = state;
    sim
}

fn build_tree(sim: &Sim, d: &Derivation, id: usize, used: &mut Vec<usize>) -> TreeProof {
    used.push(id);
    match sim.origins[id] {
        Origin::Hyp => TreeProof::hyp(sim.formulas[id].clone()),
        Origin::Step(j) => {
            if sim.consumed[j].is_empty() {
                TreeProof::axiom(d.justs[j].rule.clone(), sim.formulas[id].clone())
            } else {
                let children =
                    sim.consumed[j].iter().map(|&c| build_tree(sim, d, c, used)).collect();
                TreeProof::node(sim.formulas[id].clone(), children)
            }
        }
    }
}

/// Splits an accepted derivation at one occurrence of the conclusion
/// `phi`: the tree proves `phi` from part of the premises, the rest
/// derivation establishes the remaining conclusions from what is left.
pub fn split_derivation(
    sys: &AxiomaticSystem,
    d: &Derivation,
    claim: &Consecution,
    phi: &Formula,
) -> Result<SplitResult, ProofError> {
    require_single_conclusion(sys)?;
    if !check_derivation(sys, d, claim).is_accepted() {
        return Err(ProofError::Precondition("the derivation does not check against the claim".into()));
    }
    if !claim.conclusions.contains(phi) {
        return Err(ProofError::Precondition(format!("{phi} is not among the claimed conclusions")));
    }

    let sim = simulate(sys, d);
    let root = *sim
        .final_state
        .iter()
        .find(|&&id| sim.formulas[id] == *phi)
        .expect("an accepted claim's conclusions survive to the final step");
    let mut used = vec![];
    let tree = build_tree(&sim, d, root, &mut used);
    used.sort_unstable();
    let tree_steps: Vec<usize> = used
        .iter()
        .filter_map(|&id| match sim.origins[id] {
            Origin::Step(j) => Some(j),
            Origin::Hyp => None,
        })
        .collect();

    // Replay the untouched steps on the untouched occurrences.  A step
    // outside the tree cannot consume a tree occurrence: every tree
    // occurrence except the root is consumed by its tree parent, and the
    // root is never consumed at all.
    let hyp_count = d.steps[0].size().to_usize().expect("premise counts fit in usize");
    let mut state: Vec<usize> = (0..hyp_count).filter(|id| used.binary_search(id).is_err()).collect();
    let to_multiset =
        |ids: &[usize]| ids.iter().map(|&id| sim.formulas[id].clone()).collect::<Multiset<Formula>>();
    let mut steps = vec![to_multiset(&state)];
    let mut justs = vec![];
    let tree_premises = tree.hypotheses();
    debug_assert_eq!(steps[0].sum(&tree_premises), claim.premises);
    for (j, just) in d.justs.iter().enumerate() {
        if tree_steps.binary_search(&j).is_ok() {
            continue;
        }
        for &id in &sim.consumed[j] {
            debug_assert!(used.binary_search(&id).is_err());
            let pos = state.iter().position(|&x| x == id).expect("kept steps consume kept occurrences");
            state.remove(pos);
        }
        state.push(sim.produced[j]);
        steps.push(to_multiset(&state));
        justs.push(just.clone());
    }
    let rest = Derivation { steps, justs };
    let rest_claim = Consecution {
        premises: rest.steps[0].clone(),
        conclusions: claim.conclusions.difference(&Multiset::singleton(phi.clone())),
    };
    Ok(SplitResult { tree, tree_premises, rest, rest_claim })
}

/// Flattens a tree proof into a derivation of its root from its `hyp`
/// leaves.  Substitutions are re-discovered at every node, first match in
/// system order.
pub fn tree_to_derivation(
    sys: &AxiomaticSystem,
    t: &TreeProof,
) -> Result<(Derivation, Consecution), ProofError> {
    require_single_conclusion(sys)?;
    let (d, hyps) = flatten(sys, t)?;
    let claim = Consecution { premises: hyps, conclusions: Multiset::singleton(t.label.clone()) };
    Ok((d, claim))
}

fn flatten(
    sys: &AxiomaticSystem,
    t: &TreeProof,
) -> Result<(Derivation, Multiset<Formula>), ProofError> {
    if t.children.is_empty() {
        return match &t.tag {
            Some(LeafTag::Hyp) => {
                let m = Multiset::singleton(t.label.clone());
                Ok((Derivation { steps: vec![m.clone()], justs: vec![] }, m))
            }
            Some(LeafTag::Axiom(name)) => {
                let schema = sys
                    .schema(name)
                    .filter(|s| s.is_axiom())
                    .ok_or_else(|| ProofError::Precondition(format!("`{name}` is not an axiom of the system")))?;
                let target = Multiset::singleton(t.label.clone());
                let subst = match_multiset_exact(&schema.conclusions, &target)
                    .into_iter()
                    .next()
                    .ok_or_else(|| {
                        ProofError::Precondition(format!("{} is not an instance of {name}", t.label))
                    })?;
                let d = Derivation {
                    steps: vec![Multiset::new(), target],
                    justs: vec![StepJust { rule: name.clone(), subst, at: Multiset::new() }],
                };
                Ok((d, Multiset::new()))
            }
            None => Err(ProofError::Precondition("a leaf must be tagged hyp or axiom".into())),
        };
    }

    let parts: Vec<(Derivation, Multiset<Formula>)> =
        t.children.iter().map(|c| flatten(sys, c)).collect::<Result<_, _>>()?;
    let delta: Multiset<Formula> = t.children.iter().map(|c| c.label.clone()).collect();
    let target = Multiset::singleton(t.label.clone());
    let (schema, subst) = sys
        .schemata
        .iter()
        .find_map(|s| {
            match_consecution_exact(&s.premises, &s.conclusions, &delta, &target).map(|sub| (s, sub))
        })
        .ok_or_else(|| {
            ProofError::Precondition(format!("no rule instance derives {} from {delta}", t.label))
        })?;

    // Derive each child with its siblings as context: finished conclusions
    // accumulate on the left, pending hypotheses wait on the right.
    let mut finished = Multiset::new();
    let mut pending: Multiset<Formula> = parts.iter().map(|(_, h)| h).fold(Multiset::new(), |a, h| a.sum(h));
    let hyps = pending.clone();
    let mut out: Option<Derivation> = None;
    for (child, (d, h)) in t.children.iter().zip(&parts) {
        pending = pending.difference(h);
        let ctx = finished.sum(&pending);
        let piece = with_context(d, &ctx);
        out = Some(match out {
            None => piece,
            Some(acc) => concat(&acc, &piece).expect("sibling contexts align by construction"),
        });
        finished.insert(child.label.clone());
    }
    let mut d = out.expect("an inner node has children");
    d.steps.push(target);
    d.justs.push(StepJust { rule: schema.name.clone(), subst, at: delta });
    Ok((d, hyps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_consecution, parse_formula, parse_formula_multiset as pm};
    use crate::proof::derivation::{Verdict, format_certificate, parse_certificate};
    use crate::proof::search::{Budget, search_derivation};
    use crate::proof::system::load_system;
    use crate::proof::tree::check_tree_proof;

    fn mp_system() -> AxiomaticSystem {
        load_system("axiom K: [] |> [p->(q->p)]\nrule MP: [p, p->q] |> [q]\n").unwrap()
    }

    fn found(sys: &AxiomaticSystem, claim: &str) -> (Derivation, Consecution) {
        let claim = parse_consecution(claim).unwrap();
        let d = search_derivation(sys, &claim, &Budget::default()).found().cloned().unwrap();
        (d, claim)
    }

    #[test]
    fn one_detachment_splits_into_its_tree_and_nothing() {
        let sys = mp_system();
        let (d, claim) = found(&sys, "[a, a->b] |> [b]");
        let phi = parse_formula("b").unwrap();
        let s = split_derivation(&sys, &d, &claim, &phi).unwrap();
        assert_eq!(s.tree_premises, pm("[a, a->b]").unwrap());
        assert!(check_tree_proof(&sys, &s.tree, &s.tree_premises, &phi).unwrap().is_accepted());
        assert_eq!(s.rest.steps, vec![Multiset::new()]);
        assert_eq!(s.rest_claim, parse_consecution("[] |> []").unwrap());
        assert!(check_derivation(&sys, &s.rest, &s.rest_claim).is_accepted());
    }

    #[test]
    fn bystander_premises_stay_in_the_rest() {
        let sys = mp_system();
        let claim = parse_consecution("[a, a->b, z] |> [b, z]").unwrap();
        let d = Derivation {
            steps: vec![pm("[a, a->b, z]").unwrap(), pm("[b, z]").unwrap()],
            justs: vec![StepJust {
                rule: "MP".into(),
                subst: crate::formula::Substitution::from_pairs([
                    ("p".to_string(), parse_formula("a").unwrap()),
                    ("q".to_string(), parse_formula("b").unwrap()),
                ]),
                at: pm("[a, a->b]").unwrap(),
            }],
        };
        assert!(check_derivation(&sys, &d, &claim).is_accepted());
        let phi = parse_formula("b").unwrap();
        let s = split_derivation(&sys, &d, &claim, &phi).unwrap();
        assert_eq!(s.tree_premises, pm("[a, a->b]").unwrap());
        assert_eq!(s.rest_claim, parse_consecution("[z] |> [z]").unwrap());
        assert!(check_derivation(&sys, &s.rest, &s.rest_claim).is_accepted());
        // The one real step belonged to the tree, so the rest is a bare [z].
        assert_eq!(s.rest.steps, vec![pm("[z]").unwrap()]);
    }

    #[test]
    fn axiom_leaves_come_back_as_empty_premise_steps() {
        let sys = mp_system();
        let t = TreeProof::axiom("K", parse_formula("a->(b->a)").unwrap());
        let (d, claim) = tree_to_derivation(&sys, &t).unwrap();
        assert_eq!(claim, parse_consecution("[] |> [a->(b->a)]").unwrap());
        assert_eq!(d.steps.len(), 2);
        assert!(d.steps[0].is_empty());
        assert!(check_derivation(&sys, &d, &claim).is_accepted());
    }

    #[test]
    fn a_nested_tree_flattens_and_checks() {
        let sys = mp_system();
        let t = crate::proof::tree::parse_tree("r\n  q\n    hyp: p\n    hyp: p -> q\n  hyp: q -> r\n").unwrap();
        let (d, claim) = tree_to_derivation(&sys, &t).unwrap();
        assert_eq!(claim, parse_consecution("[p, p->q, q->r] |> [r]").unwrap());
        assert!(check_derivation(&sys, &d, &claim).is_accepted());
        // 2 sub-conclusions: [p, p→q, q→r] → [q, q→r] → [r].
        assert_eq!(d.steps.len(), 3);
    }

    #[test]
    fn split_then_flatten_round_trips_the_claim() {
        let sys = mp_system();
        let (d, claim) = found(&sys, "[a] |> [b->a]");
        let phi = parse_formula("b->a").unwrap();
        let s = split_derivation(&sys, &d, &claim, &phi).unwrap();
        assert!(check_tree_proof(&sys, &s.tree, &s.tree_premises, &phi).unwrap().is_accepted());
        let (d2, claim2) = tree_to_derivation(&sys, &s.tree).unwrap();
        assert_eq!(claim2.conclusions, Multiset::singleton(phi));
        assert_eq!(claim2.premises, s.tree_premises);
        assert!(check_derivation(&sys, &d2, &claim2).is_accepted());
        // The whole certificate pipeline survives a text round trip.
        let text = format_certificate(&d2, &claim2);
        let (d3, c3) = parse_certificate(&text).unwrap();
        assert_eq!(check_derivation(&sys, &d3, &c3), Verdict::Accepted);
    }

    #[test]
    fn preconditions_are_reported() {
        let sys = mp_system();
        let (d, claim) = found(&sys, "[a, a->b] |> [b]");
        let not_concluded = parse_formula("a").unwrap();
        assert!(matches!(
            split_derivation(&sys, &d, &claim, &not_concluded),
            Err(ProofError::Precondition(_))
        ));
        let wide = load_system("rule Split: [p*q] |> [p, q]\n").unwrap();
        assert!(matches!(
            split_derivation(&wide, &d, &claim, &parse_formula("b").unwrap()),
            Err(ProofError::NotSingleConclusion(2))
        ));
        let untagged = TreeProof::node(parse_formula("q").unwrap(), vec![]);
        assert!(matches!(tree_to_derivation(&sys, &untagged), Err(ProofError::Precondition(_))));
    }
}
