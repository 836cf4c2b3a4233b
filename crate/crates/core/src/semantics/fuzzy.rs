//! Unit-interval matrices: valuations into an evenly spaced chain, values
//! pushed into [0,1] by a strictly monotone fusion-preserving map, and
//! designation by thresholds.
//!
//! With the whole family of thresholds {[a,1] : a ∈ [0,1]}, designation
//! preservation at every threshold collapses to the pointwise comparison
//! "premise fusion ≤ conclusion fusion" — contexts factor out because the
//! map turns multiset union into the bounded product, which is monotone.
//! A single threshold keeps its contexts: the check then quantifies over
//! the finitely many context values the carrier can reach.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::SemanticsError;
use crate::formula::Consecution;
use crate::semantics::algebra::{FiniteAlgebra, luk_value};
use crate::structures::ValidationReport;

/// Designated value sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Threshold {
    /// The whole family {[a,1] : a ∈ [0,1]} at once.
    Family,
    /// The single set [a,1].
    At(BigRational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzyMatrix {
    /// Number of evenly spaced chain points valuations range over.
    pub chain: usize,
    /// Image of each chain point in [0,1]; `identity` uses the points
    /// themselves.
    pub map: Vec<BigRational>,
    pub threshold: Threshold,
}

fn tensor(x: &BigRational, y: &BigRational) -> BigRational {
    (x + y - BigRational::one()).max(BigRational::zero())
}

impl FuzzyMatrix {
    pub fn identity(chain: usize, threshold: Threshold) -> FuzzyMatrix {
        FuzzyMatrix { chain, map: (0..chain).map(|i| luk_value(chain, i)).collect(), threshold }
    }

    /// The map must be a strictly monotone function into [0,1] sending the
    /// top to 1 and preserving the bounded product; checked exhaustively
    /// over the chain. (Squaring, for instance, passes on coarse chains but
    /// fails on fine ones.)
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        if self.chain < 2 {
            report.push("chain-size", format!("a chain needs at least 2 points, got {}", self.chain));
            return report;
        }
        if self.map.len() != self.chain {
            report.push("map-total", format!("{} chain points but {} images", self.chain, self.map.len()));
            return report;
        }
        if let Threshold::At(a) = &self.threshold {
            if a < &BigRational::zero() || a > &BigRational::one() {
                report.push("threshold-range", format!("threshold {a} outside [0,1]"));
            }
        }
        for (i, v) in self.map.iter().enumerate() {
            if v < &BigRational::zero() || v > &BigRational::one() {
                report.push("map-range", format!("point {i} maps to {v} outside [0,1]"));
            }
            if i + 1 < self.chain && self.map[i] >= self.map[i + 1] {
                report.push("map-strictly-monotone", format!("points {i} and {} collide or swap", i + 1));
            }
        }
        if self.map.last().map(|v| !v.is_one()).unwrap_or(false) {
            report.push("map-unit", "the top point must map to 1".to_string());
        }
        let alg = FiniteAlgebra::luk_chain(self.chain);
        let fuse = alg.fuse.as_ref().unwrap();
        for i in 0..self.chain {
            for j in 0..self.chain {
                let lhs = &self.map[fuse[i * self.chain + j]];
                let rhs = tensor(&self.map[i], &self.map[j]);
                if *lhs != rhs {
                    report.push(
                        "map-fusion",
                        format!("f({i}⊗{j}) = {lhs} but f({i})⊗f({j}) = {rhs}"),
                    );
                }
            }
        }
        report
    }

    /// All context values: the closure of {1} under tensoring with images
    /// of chain points.
    fn context_values(&self) -> BTreeSet<BigRational> {
        let mut out = BTreeSet::from([BigRational::one()]);
        loop {
            let fresh: Vec<BigRational> = out
                .iter()
                .flat_map(|c| self.map.iter().map(move |v| tensor(c, v)))
                .filter(|v| !out.contains(v))
                .collect();
            if fresh.is_empty() {
                return out;
            }
            out.extend(fresh);
        }
    }
}

/// Counterexample to a fuzzy consequence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzyWitness {
    /// Index of the refuting matrix in the input list.
    pub matrix: usize,
    /// Chain valuation, as exact rationals.
    pub valuation: Vec<(String, BigRational)>,
    /// Refuting context value under a single threshold.
    pub context: Option<BigRational>,
}

/// Γ entails Δ in every listed matrix: thresholds-as-a-family matrices use
/// the pointwise criterion, single-threshold matrices quantify over
/// contexts as well.
pub fn fuzzy_consequence(
    matrices: &[FuzzyMatrix],
    c: &Consecution,
) -> Result<Option<FuzzyWitness>, SemanticsError> {
    for (mi, m) in matrices.iter().enumerate() {
        let alg = FiniteAlgebra::luk_chain(m.chain);
        let contexts: Vec<BigRational> = match &m.threshold {
            Threshold::Family => Vec::new(),
            Threshold::At(_) => m.context_values().into_iter().collect(),
        };
        for val in alg.valuations(&alg.free_vars(c))? {
            let lhs = &m.map[alg.eval_fusion(&c.premises, &val)?];
            let rhs = &m.map[alg.eval_fusion(&c.conclusions, &val)?];
            let witness_val = || {
                val.iter().map(|(v, &i)| (v.clone(), luk_value(m.chain, i))).collect::<Vec<_>>()
            };
            match &m.threshold {
                Threshold::Family => {
                    if lhs > rhs {
                        return Ok(Some(FuzzyWitness { matrix: mi, valuation: witness_val(), context: None }));
                    }
                }
                Threshold::At(a) => {
                    for ctx in &contexts {
                        if &tensor(ctx, lhs) >= a && &tensor(ctx, rhs) < a {
                            return Ok(Some(FuzzyWitness {
                                matrix: mi,
                                valuation: witness_val(),
                                context: Some(ctx.clone()),
                            }));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}
