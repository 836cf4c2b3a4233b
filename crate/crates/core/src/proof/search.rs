//! Bounded search for derivations by iterative deepening.
//!
//! States are formula multisets; a move either applies a rule schema to an
//! embedded instance of its premises or inserts an axiom instance.  Axiom
//! variables range over the subformulas of the claim, which keeps the move
//! set finite; the trade-off is that insertions needing formulas from
//! outside the claim are beyond this search, so a miss is always reported
//! as inconclusive rather than as a refutation.
//!
//! Moves are enumerated in a fixed order — rule schemata in system order
//! with their matches in sorted order, then axiom schemata in system order
//! with instances in pool-lexicographic order — and the depth limit grows
//! one step at a time, so the first derivation found is the
//! lexicographically least certificate at the lowest reachable depth,
//! independent of any internal exploration detail.

use std::collections::BTreeMap;

use crate::formula::{Consecution, Formula, Substitution};
use crate::multiset::Multiset;
use crate::proof::derivation::{Derivation, StepJust};
use crate::proof::matching::match_multiset_sub;
use crate::proof::system::AxiomaticSystem;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    /// Most steps beyond the starting multiset.
    pub max_depth: usize,
    /// Most states expanded across all deepening rounds.
    pub max_nodes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_depth: 6, max_nodes: 200_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Derivation),
    /// No derivation within the depth limit.  `budget_exhausted` tells an
    /// aborted round apart from a fully explored one; neither outcome
    /// refutes derivability in general because the axiom pool is bounded.
    NotFound { explored: usize, budget_exhausted: bool },
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&Derivation> {
        match self {
            SearchOutcome::Found(d) => Some(d),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

fn collect_subformulas(f: &Formula, out: &mut std::collections::BTreeSet<Formula>) {
    out.insert(f.clone());
    match f {
        Formula::Var(_) | Formula::One => {}
        Formula::Meet(l, r) | Formula::Join(l, r) | Formula::Fusion(l, r) | Formula::Imp(l, r) => {
            collect_subformulas(l, out);
            collect_subformulas(r, out);
        }
    }
}

/// All distinct subformulas of the claim, sorted.
fn subformula_pool(claim: &Consecution) -> Vec<Formula> {
    let mut set = std::collections::BTreeSet::new();
    for f in claim.premises.support().chain(claim.conclusions.support()) {
        collect_subformulas(f, &mut set);
    }
    set.into_iter().collect()
}

struct Search<'a> {
    sys: &'a AxiomaticSystem,
    pool: Vec<Formula>,
    goal: &'a Multiset<Formula>,
    /// Deepest remaining budget each state was expanded with, per round.
    memo: BTreeMap<Multiset<Formula>, usize>,
    nodes: usize,
    max_nodes: usize,
    exhausted: bool,
    steps: Vec<Multiset<Formula>>,
    justs: Vec<StepJust>,
}

impl Search<'_> {
    /// Axiom instances over the pool for the sorted variable set, in
    /// lexicographic order (first variable slowest).
    fn axiom_substs(&self, vars: &[String]) -> Vec<Substitution> {
        if vars.is_empty() {
            return vec![Substitution::identity()];
        }
        if self.pool.is_empty() {
            return vec![];
        }
        let mut out = Vec::new();
        let mut idx = vec![0usize; vars.len()];
        loop {
            out.push(Substitution::from_pairs(
                vars.iter().cloned().zip(idx.iter().map(|&i| self.pool[i].clone())),
            ));
            let mut pos = vars.len();
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < self.pool.len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }

    fn dfs(&mut self, remaining: usize) -> bool {
        let state = self.steps.last().unwrap().clone();
        if self.goal.subset_of(&state) {
            return true;
        }
        if remaining == 0 || self.exhausted {
            return false;
        }
        if self.memo.get(&state).is_some_and(|&r| r >= remaining) {
            return false;
        }
        self.memo.insert(state.clone(), remaining);
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.exhausted = true;
            return false;
        }

        // Rule applications first: they are few and goal-directed.
        for schema in self.sys.schemata.iter().filter(|s| !s.is_axiom()) {
            for (subst, at) in match_multiset_sub(&schema.premises, &state) {
                let next = state.difference(&at).sum(&subst.apply_multiset(&schema.conclusions));
                self.steps.push(next);
                self.justs.push(StepJust { rule: schema.name.clone(), subst, at });
                if self.dfs(remaining - 1) {
                    return true;
                }
                self.steps.pop();
                self.justs.pop();
                if self.exhausted {
                    return false;
                }
            }
        }
        for schema in self.sys.schemata.iter().filter(|s| s.is_axiom()) {
            let vars: Vec<String> = schema.vars().into_iter().collect();
            for subst in self.axiom_substs(&vars) {
                let next = state.sum(&subst.apply_multiset(&schema.conclusions));
                self.steps.push(next);
                self.justs.push(StepJust { rule: schema.name.clone(), subst, at: Multiset::new() });
                if self.dfs(remaining - 1) {
                    return true;
                }
                self.steps.pop();
                self.justs.pop();
                if self.exhausted {
                    return false;
                }
            }
        }
        false
    }
}

/// Looks for a derivation of `claim` within `budget`.  A found derivation
/// always replays through [`crate::proof::check_derivation`].
pub fn search_derivation(sys: &AxiomaticSystem, claim: &Consecution, budget: &Budget) -> SearchOutcome {
    let mut s = Search {
        sys,
        pool: subformula_pool(claim),
        goal: &claim.conclusions,
        memo: BTreeMap::new(),
        nodes: 0,
        max_nodes: budget.max_nodes,
        exhausted: false,
        steps: vec![claim.premises.clone()],
        justs: vec![],
    };
    for limit in 0..=budget.max_depth {
        s.memo.clear();
        if s.dfs(limit) {
            return SearchOutcome::Found(Derivation { steps: s.steps, justs: s.justs });
        }
        if s.exhausted {
            break;
        }
    }
    SearchOutcome::NotFound { explored: s.nodes, budget_exhausted: s.exhausted }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_consecution, parse_formula_multiset as pm};
    use crate::proof::derivation::check_derivation;
    use crate::proof::system::load_system;

    fn mp_system() -> AxiomaticSystem {
        load_system("axiom K: [] |> [p->(q->p)]\nrule MP: [p, p->q] |> [q]\n").unwrap()
    }

    #[test]
    fn reflexive_claims_need_no_moves() {
        let sys = AxiomaticSystem::empty();
        let claim = parse_consecution("[a, b] |> [b]").unwrap();
        let d = search_derivation(&sys, &claim, &Budget::default()).found().cloned().unwrap();
        assert_eq!(d.steps, vec![pm("[a, b]").unwrap()]);
        assert!(check_derivation(&sys, &d, &claim).is_accepted());
    }

    #[test]
    fn detachment_is_found_at_depth_one() {
        let sys = mp_system();
        let claim = parse_consecution("[a, a->b] |> [b]").unwrap();
        let d = search_derivation(&sys, &claim, &Budget::default()).found().cloned().unwrap();
        assert_eq!(d.steps.len(), 2);
        assert!(check_derivation(&sys, &d, &claim).is_accepted());
    }

    #[test]
    fn axiom_insertions_use_claim_subformulas() {
        let sys = mp_system();
        // Needs K at p := a, q := b, both read off the claim.
        let claim = parse_consecution("[] |> [a->(b->a)]").unwrap();
        let d = search_derivation(&sys, &claim, &Budget::default()).found().cloned().unwrap();
        assert_eq!(d.steps.len(), 2);
        assert_eq!(d.justs[0].rule, "K");
        assert!(check_derivation(&sys, &d, &claim).is_accepted());

        // Chained: insert K's instance, then detach it against the premise.
        let claim = parse_consecution("[a] |> [b->a]").unwrap();
        let d = search_derivation(&sys, &claim, &Budget::default()).found().cloned().unwrap();
        assert_eq!(d.steps.len(), 3);
        assert!(check_derivation(&sys, &d, &claim).is_accepted());
    }

    #[test]
    fn the_least_certificate_is_returned() {
        // Two rules can both close the goal; the one declared first wins.
        let sys = load_system("rule A: [p] |> [p&p]\nrule B: [q] |> [q&q]\n").unwrap();
        let claim = parse_consecution("[x] |> [x&x]").unwrap();
        let d = search_derivation(&sys, &claim, &Budget::default()).found().cloned().unwrap();
        assert_eq!(d.justs[0].rule, "A");
        let again = search_derivation(&sys, &claim, &Budget::default()).found().cloned().unwrap();
        assert_eq!(d, again);
    }

    #[test]
    fn misses_are_inconclusive_not_refutations() {
        let sys = mp_system();
        let claim = parse_consecution("[p] |> [p, p]").unwrap();
        let out = search_derivation(&sys, &claim, &Budget { max_depth: 3, max_nodes: 100_000 });
        let SearchOutcome::NotFound { explored, .. } = out else {
            panic!("contraction must not be derivable");
        };
        assert!(explored > 0);

        let tiny = search_derivation(&sys, &claim, &Budget { max_depth: 6, max_nodes: 10 });
        let SearchOutcome::NotFound { budget_exhausted: true, .. } = tiny else {
            panic!("a ten-node budget cannot finish depth six");
        };
    }
}
