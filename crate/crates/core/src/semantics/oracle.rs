//! Consequence oracles.
//!
//! `rl_consequence` decides Γ ⊢ Δ over a list of finite algebras by scanning
//! every valuation and comparing the fusions of the two sides. `mv_oracle`
//! does the same over the rational unit interval: an exhaustive scan of the
//! evenly spaced chains up to a bound, then seeded random rational
//! valuations. Verdicts are one-sided — a witness is an exact refutation,
//! while "valid" only means "no counterexample within the scan".

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha12Rng;

use super::SemanticsError;
use crate::formula::{Consecution, Formula};
use crate::multiset::Multiset;
use crate::semantics::algebra::{FiniteAlgebra, luk_value};

/// A valuation refuting the claim in one finite algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RlWitness {
    pub algebra: String,
    pub valuation: BTreeMap<String, usize>,
}

/// First refuting valuation of `alg` in lexicographic scan order.
fn scan_algebra(
    alg: &FiniteAlgebra,
    c: &Consecution,
) -> Result<Option<BTreeMap<String, usize>>, SemanticsError> {
    for val in alg.valuations(&alg.free_vars(c))? {
        let lhs = alg.eval_fusion(&c.premises, &val)?;
        let rhs = alg.eval_fusion(&c.conclusions, &val)?;
        if !alg.le(lhs, rhs)? {
            return Ok(Some(val));
        }
    }
    Ok(None)
}

/// Γ ⊢ Δ holds in every listed algebra iff the result is `None`; otherwise
/// the first counterexample in (algebra, valuation) scan order is returned.
pub fn rl_consequence(
    algebras: &[FiniteAlgebra],
    c: &Consecution,
) -> Result<Option<RlWitness>, SemanticsError> {
    for alg in algebras {
        if let Some(valuation) = scan_algebra(alg, c)? {
            return Ok(Some(RlWitness { algebra: alg.name.clone(), valuation }));
        }
    }
    Ok(None)
}

/// Exact Łukasiewicz evaluation on [0,1]: x∧y = min, x∨y = max,
/// x·y = max(0, x+y−1), x→y = min(1, 1−x+y), 1 = 1.
pub fn mv_eval(
    f: &Formula,
    val: &BTreeMap<String, BigRational>,
) -> Result<BigRational, SemanticsError> {
    let one = BigRational::one;
    Ok(match f {
        Formula::Var(v) => {
            val.get(v).cloned().ok_or_else(|| SemanticsError::UnboundVariable(v.clone()))?
        }
        Formula::One => one(),
        Formula::Meet(a, b) => mv_eval(a, val)?.min(mv_eval(b, val)?),
        Formula::Join(a, b) => mv_eval(a, val)?.max(mv_eval(b, val)?),
        Formula::Fusion(a, b) => (mv_eval(a, val)? + mv_eval(b, val)? - one()).max(BigRational::zero()),
        Formula::Imp(a, b) => (one() - mv_eval(a, val)? + mv_eval(b, val)?).min(one()),
    })
}

/// Fusion of all occurrences (1 when empty).
pub fn mv_fusion(
    m: &Multiset<Formula>,
    val: &BTreeMap<String, BigRational>,
) -> Result<BigRational, SemanticsError> {
    let mut acc = BigRational::one();
    for f in m.occurrences() {
        acc = (acc + mv_eval(f, val)? - BigRational::one()).max(BigRational::zero());
    }
    Ok(acc)
}

#[derive(Debug, Clone)]
pub struct OracleOptions {
    /// Chains with 2..=max_chain evenly spaced points are scanned exhaustively.
    pub max_chain: usize,
    /// Number of random rational valuations tried after the chain scan.
    pub samples: usize,
    pub seed: u64,
    /// Worker threads; any value yields the same verdict.
    pub jobs: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { max_chain: 11, samples: 10_000, seed: 0, jobs: 1 }
    }
}

/// An exact refuting valuation: the premise fusion is strictly above the
/// conclusion fusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MvWitness {
    /// Chain size when found by the chain scan, `None` for a sampled hit.
    pub chain: Option<usize>,
    pub valuation: Vec<(String, BigRational)>,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MvVerdict {
    /// No counterexample on any scanned chain or sample.
    ValidUpTo { max_chain: usize, samples: usize },
    Invalid(MvWitness),
}

impl MvVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, MvVerdict::ValidUpTo { .. })
    }
}

fn rational_witness(
    c: &Consecution,
    chain: Option<usize>,
    val: BTreeMap<String, BigRational>,
) -> Result<MvWitness, SemanticsError> {
    let lhs = mv_fusion(&c.premises, &val)?;
    let rhs = mv_fusion(&c.conclusions, &val)?;
    debug_assert!(lhs > rhs);
    Ok(MvWitness { chain, valuation: val.into_iter().collect(), lhs, rhs })
}

/// One random rational valuation with denominators up to 64, derived from a
/// per-sample seed so the result is independent of thread count.
fn sample_valuation(vars: &[String], seed: u64, k: u64) -> BTreeMap<String, BigRational> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed.wrapping_add(k));
    vars.iter()
        .map(|v| {
            let den: u64 = rng.random_range(1..=64);
            let num: u64 = rng.random_range(0..=den);
            (v.clone(), BigRational::new(BigInt::from(num), BigInt::from(den)))
        })
        .collect()
}

/// Splits `lo..hi` round-robin over `jobs` workers, runs `work` on each
/// index, and returns the smallest index yielding `Some`.
fn first_hit<T: Send>(
    lo: usize,
    hi: usize,
    jobs: usize,
    work: impl Fn(usize) -> Result<Option<T>, SemanticsError> + Sync,
) -> Result<Option<(usize, T)>, SemanticsError> {
    let jobs = jobs.max(1).min(hi.saturating_sub(lo).max(1));
    if jobs == 1 {
        for i in lo..hi {
            if let Some(t) = work(i)? {
                return Ok(Some((i, t)));
            }
        }
        return Ok(None);
    }
    let results: Vec<Result<Option<(usize, T)>, SemanticsError>> = std::thread::scope(|scope| {
        let work = &work;
        let handles: Vec<_> = (0..jobs)
            .map(|w| {
                scope.spawn(move || {
                    for i in (lo + w..hi).step_by(jobs) {
                        if let Some(t) = work(i)? {
                            return Ok(Some((i, t)));
                        }
                    }
                    Ok(None)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("oracle worker panicked")).collect()
    });
    let mut best: Option<(usize, T)> = None;
    for r in results {
        if let Some((i, t)) = r? {
            if best.as_ref().is_none_or(|(j, _)| i < *j) {
                best = Some((i, t));
            }
        }
    }
    Ok(best)
}

/// Decides Γ ⊢ Δ over [0,1]: exhaustive scan of the chains, then seeded
/// random rational samples. The witness, when any exists within the scan,
/// is the lexicographically least one: smallest chain first, then the first
/// valuation in grid order; sampled witnesses report the earliest sample.
pub fn mv_oracle(c: &Consecution, opts: &OracleOptions) -> Result<MvVerdict, SemanticsError> {
    let chain_hit = first_hit(2, opts.max_chain.max(1) + 1, opts.jobs, |n| {
        Ok(scan_algebra(&FiniteAlgebra::luk_chain(n), c)?.map(|val| (n, val)))
    })?;
    if let Some((_, (n, val))) = chain_hit {
        let rational: BTreeMap<String, BigRational> =
            val.into_iter().map(|(v, i)| (v, luk_value(n, i))).collect();
        return Ok(MvVerdict::Invalid(rational_witness(c, Some(n), rational)?));
    }

    let vars: Vec<String> = c.vars().into_iter().collect();
    let sample_hit = first_hit(0, opts.samples, opts.jobs, |k| {
        let val = sample_valuation(&vars, opts.seed, k as u64);
        Ok((mv_fusion(&c.premises, &val)? > mv_fusion(&c.conclusions, &val)?).then_some(val))
    })?;
    if let Some((_, val)) = sample_hit {
        return Ok(MvVerdict::Invalid(rational_witness(c, None, val)?));
    }
    Ok(MvVerdict::ValidUpTo { max_chain: opts.max_chain, samples: opts.samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_consecution;

    fn claim(s: &str) -> Consecution {
        parse_consecution(s).unwrap()
    }

    #[test]
    fn detachment_and_weakening_are_valid() {
        let opts = OracleOptions { max_chain: 7, samples: 500, ..OracleOptions::default() };
        for s in ["[p, p->q] |> [q]", "[p, q] |> [p]", "[] |> [(p->q)|(q->p)]", "[p&p] |> [p]"] {
            assert!(mv_oracle(&claim(s), &opts).unwrap().is_valid(), "{s}");
        }
    }

    #[test]
    fn contraction_fails_first_on_the_three_chain() {
        let v = mv_oracle(&claim("[p] |> [p, p]"), &OracleOptions::default()).unwrap();
        let MvVerdict::Invalid(w) = v else { panic!("expected a witness") };
        assert_eq!(w.chain, Some(3));
        assert_eq!(w.valuation, vec![("p".to_string(), luk_value(3, 1))]);
        assert_eq!(w.lhs, luk_value(3, 1));
        assert!(w.rhs.is_zero());
    }

    #[test]
    fn the_least_witness_is_reported() {
        let v = mv_oracle(&claim("[p] |> [p, q]"), &OracleOptions::default()).unwrap();
        let MvVerdict::Invalid(w) = v else { panic!("expected a witness") };
        assert_eq!(w.chain, Some(2));
        assert_eq!(
            w.valuation,
            vec![("p".to_string(), BigRational::one()), ("q".to_string(), BigRational::zero())]
        );
    }

    #[test]
    fn sampling_catches_what_small_chains_miss() {
        let opts = OracleOptions { max_chain: 2, samples: 200, ..OracleOptions::default() };
        let v = mv_oracle(&claim("[p] |> [p, p]"), &opts).unwrap();
        let MvVerdict::Invalid(w) = v else { panic!("expected a sampled witness") };
        assert_eq!(w.chain, None);
        assert!(w.lhs > w.rhs);
    }

    #[test]
    fn verdicts_do_not_depend_on_thread_count() {
        for s in ["[p] |> [p, p]", "[p] |> [p, q]", "[p, p->q] |> [q]"] {
            let serial = mv_oracle(&claim(s), &OracleOptions { jobs: 1, ..OracleOptions::default() }).unwrap();
            let parallel = mv_oracle(&claim(s), &OracleOptions { jobs: 4, ..OracleOptions::default() }).unwrap();
            assert_eq!(serial, parallel, "{s}");
        }
    }

    #[test]
    fn finite_model_scan_reports_the_algebra() {
        let algs = [FiniteAlgebra::luk_chain(2), FiniteAlgebra::luk_chain(3)];
        assert!(rl_consequence(&algs, &claim("[p, p->q] |> [q]")).unwrap().is_none());
        let w = rl_consequence(&algs, &claim("[p] |> [p, p]")).unwrap().unwrap();
        assert_eq!(w.algebra, "Luk3");
        assert_eq!(w.valuation[&"p".to_string()], 1);
    }
}
