//! The largest congruence compatible with a hypermatrix's designated family,
//! and reduction of the model by it.
//!
//! Congruences are enumerated by closing the principal congruences under
//! pairwise join; compatibility asks that swapping member occurrences for
//! congruent elements never leaves the designated family. The family is kept
//! finitely generated, so the quantification runs over its members and the
//! class-respecting recombinations of each member.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;

use super::SemanticsError;
use crate::multiset::Multiset;
use crate::semantics::algebra::FiniteAlgebra;
use crate::semantics::downset::{MultisetDownset, multisets_of_size};
use crate::semantics::hypermatrix::Hypermatrix;
use crate::structures::ValidationReport;

/// Largest carrier the congruence enumeration accepts.
pub const MAX_LEIBNIZ_CARRIER: usize = 5;

/// A partition as a canonical class map: classes numbered by first
/// occurrence, so equal maps mean equal partitions.
type Partition = Vec<usize>;

fn canonical(classes: &[usize]) -> Partition {
    let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
    classes
        .iter()
        .map(|c| {
            let next = relabel.len();
            *relabel.entry(*c).or_insert(next)
        })
        .collect()
}

fn identity_partition(n: usize) -> Partition {
    (0..n).collect()
}

/// Least congruence above `merges`, obtained by merging and then closing
/// under every interpreted operation.
fn congruence_closure(alg: &FiniteAlgebra, merges: &[(usize, usize)]) -> Partition {
    let n = alg.n();
    let mut class = identity_partition(n);
    let merge = |class: &mut Partition, a: usize, b: usize| -> bool {
        let (ca, cb) = (class[a], class[b]);
        if ca == cb {
            return false;
        }
        for c in class.iter_mut() {
            if *c == cb {
                *c = ca;
            }
        }
        true
    };
    for &(a, b) in merges {
        merge(&mut class, a, b);
    }
    let tables: Vec<&Vec<usize>> =
        [&alg.meet, &alg.join, &alg.fuse, &alg.imp].into_iter().flatten().collect();
    loop {
        let mut changed = false;
        for t in &tables {
            for a in 0..n {
                for a2 in 0..n {
                    if class[a] != class[a2] {
                        continue;
                    }
                    for b in 0..n {
                        for b2 in 0..n {
                            if class[b] == class[b2]
                                && merge(&mut class, t[a * n + b], t[a2 * n + b2])
                            {
                                changed = true;
                            }
                        }
                    }
                }
            }
        }
        if !changed {
            return canonical(&class);
        }
    }
}

fn join(alg: &FiniteAlgebra, p: &Partition, q: &Partition) -> Partition {
    let mut merges = Vec::new();
    for a in 0..p.len() {
        for b in 0..a {
            if p[a] == p[b] || q[a] == q[b] {
                merges.push((a, b));
            }
        }
    }
    congruence_closure(alg, &merges)
}

/// All congruences: identity, the principal ones, and their joins to a
/// fixpoint.
pub fn congruences(alg: &FiniteAlgebra) -> BTreeSet<Partition> {
    let n = alg.n();
    let mut out: BTreeSet<Partition> = BTreeSet::new();
    out.insert(identity_partition(n));
    for a in 0..n {
        for b in 0..a {
            out.insert(congruence_closure(alg, &[(a, b)]));
        }
    }
    loop {
        let mut fresh: Vec<Partition> = Vec::new();
        for p in &out {
            for q in &out {
                let j = join(alg, p, q);
                if !out.contains(&j) {
                    fresh.push(j);
                }
            }
        }
        if fresh.is_empty() {
            return out;
        }
        out.extend(fresh);
    }
}

/// Does swapping occurrences of members for congruent elements always stay
/// designated?
fn compatible(theta: &Partition, members: &BTreeSet<Multiset<usize>>, filter: &MultisetDownset) -> bool {
    let classes: BTreeMap<usize, Vec<usize>> = {
        let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (e, c) in theta.iter().enumerate() {
            m.entry(*c).or_default().push(e);
        }
        m
    };
    for x in members {
        // Per-class occurrence counts of the member.
        let mut profile: BTreeMap<usize, usize> = BTreeMap::new();
        for (e, cnt) in x.iter() {
            *profile.entry(theta[*e]).or_default() += cnt.to_usize().unwrap_or(usize::MAX);
        }
        // Recombine class by class.
        let mut variants: Vec<Multiset<usize>> = vec![Multiset::new()];
        for (class, k) in &profile {
            let parts = multisets_of_size(&classes[class], *k);
            variants = variants
                .iter()
                .flat_map(|v| parts.iter().map(move |p| v.sum(p)))
                .collect();
        }
        if variants.iter().any(|b| !filter.contains(b)) {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone)]
pub struct LeibnizResult {
    /// Class map of the largest compatible congruence.
    pub classes: Partition,
    /// How many congruences were compatible in total.
    pub compatible_count: usize,
    pub report: ValidationReport,
}

/// Largest congruence compatible with the designated family.
pub fn leibniz(h: &Hypermatrix) -> Result<LeibnizResult, SemanticsError> {
    let n = h.algebra.n();
    if n > MAX_LEIBNIZ_CARRIER {
        return Err(SemanticsError::SizeGuard {
            what: format!("congruence enumeration over {}", h.algebra.name),
            got: n,
            limit: MAX_LEIBNIZ_CARRIER,
        });
    }
    let members = h.filter.members()?;
    let mut report = ValidationReport::new();
    let compatible_set: Vec<Partition> = congruences(&h.algebra)
        .into_iter()
        .filter(|theta| compatible(theta, &members, &h.filter))
        .collect();
    let below = |p: &Partition, q: &Partition| {
        (0..n).all(|a| (0..a).all(|b| p[a] != p[b] || q[a] == q[b]))
    };
    let max = compatible_set
        .iter()
        .find(|p| compatible_set.iter().all(|q| below(q, p)))
        .cloned();
    let classes = match max {
        Some(m) => m,
        None => {
            report.push_internal(
                "leibniz-maximum",
                "no single compatible congruence contains all others".to_string(),
            );
            identity_partition(n)
        }
    };
    Ok(LeibnizResult { classes, compatible_count: compatible_set.len(), report })
}

/// Quotient of the model by its Leibniz congruence. Reapplying `leibniz` to
/// the result yields the identity congruence.
pub fn reduce_model(h: &Hypermatrix) -> Result<(Hypermatrix, LeibnizResult), SemanticsError> {
    let mut res = leibniz(h)?;
    let theta = &res.classes;
    let n = h.algebra.n();
    let m = theta.iter().copied().max().map_or(0, |x| x + 1);
    let mut names: Vec<Vec<&str>> = vec![Vec::new(); m];
    let mut reps: Vec<usize> = vec![usize::MAX; m];
    for e in 0..n {
        names[theta[e]].push(&h.algebra.elems[e]);
        reps[theta[e]] = reps[theta[e]].min(e);
    }
    let elems: Vec<String> = names
        .iter()
        .map(|ns| if ns.len() == 1 { ns[0].to_string() } else { format!("{{{}}}", ns.join(",")) })
        .collect();

    let mut quot_table = |t: &Option<Vec<usize>>, op: &str| -> Option<Vec<usize>> {
        let t = t.as_ref()?;
        let mut out = vec![0usize; m * m];
        for c1 in 0..m {
            for c2 in 0..m {
                out[c1 * m + c2] = theta[t[reps[c1] * n + reps[c2]]];
                for a in 0..n {
                    for b in 0..n {
                        if theta[a] == c1 && theta[b] == c2 && theta[t[a * n + b]] != out[c1 * m + c2] {
                            res.report.push_internal(
                                "quotient-well-defined",
                                format!("`{op}` is not constant on classes {c1},{c2}"),
                            );
                        }
                    }
                }
            }
        }
        Some(out)
    };
    let algebra = FiniteAlgebra {
        name: format!("{}/θ", h.algebra.name),
        elems,
        meet: quot_table(&h.algebra.meet, "&"),
        join: quot_table(&h.algebra.join, "|"),
        fuse: quot_table(&h.algebra.fuse, "*"),
        imp: quot_table(&h.algebra.imp, "->"),
        one: h.algebra.one.map(|o| theta[o]),
        consts: h.algebra.consts.iter().map(|(k, v)| (k.clone(), theta[*v])).collect(),
    };
    let filter = h.filter.map(|e| theta[e]);
    Ok((Hypermatrix { algebra, filter }, res))
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

    /// Three bare points, the family {∅, [0], [1]}: 0 and 1 are
    /// indistinguishable, 2 is separated.
    fn three_points() -> Hypermatrix {
        Hypermatrix {
            algebra: FiniteAlgebra {
                name: "P3".to_string(),
                elems: vec!["a".into(), "b".into(), "c".into()],
                meet: None,
                join: None,
                fuse: None,
                imp: None,
                one: None,
                consts: BTreeMap::new(),
            },
            filter: MultisetDownset::new(vec![ms(&[0]), ms(&[1])]),
        }
    }

    #[test]
    fn without_operations_every_partition_is_a_congruence() {
        let h = three_points();
        assert_eq!(congruences(&h.algebra).len(), 5);
        let r = leibniz(&h).unwrap();
        assert!(r.report.is_ok(), "{}", r.report);
        assert_eq!(r.classes, vec![0, 0, 1]);
        // identity, and {a,b}{c}.
        assert_eq!(r.compatible_count, 2);
    }

    #[test]
    fn congruence_enumeration_matches_brute_force() {
        fn all_partitions(n: usize) -> Vec<Partition> {
            // Restricted-growth strings.
            let mut out = Vec::new();
            let mut cur = vec![0usize; n];
            fn go(i: usize, maxc: usize, cur: &mut Partition, out: &mut Vec<Partition>) {
                if i == cur.len() {
                    out.push(cur.clone());
                    return;
                }
                for c in 0..=maxc + 1 {
                    cur[i] = c;
                    go(i + 1, maxc.max(c), cur, out);
                }
            }
            go(1, 0, &mut cur, &mut out);
            out
        }
        fn is_congruence(alg: &FiniteAlgebra, p: &Partition) -> bool {
            let n = alg.n();
            [&alg.meet, &alg.join, &alg.fuse, &alg.imp].into_iter().flatten().all(|t| {
                (0..n).all(|a| {
                    (0..n).all(|a2| {
                        p[a] != p[a2]
                            || (0..n).all(|b| {
                                (0..n).all(|b2| p[b] != p[b2] || p[t[a * n + b]] == p[t[a2 * n + b2]])
                            })
                    })
                })
            })
        }

        for alg in [FiniteAlgebra::luk_chain(3), FiniteAlgebra::luk_chain(4), three_points().algebra]
        {
            let brute: BTreeSet<Partition> = all_partitions(alg.n())
                .into_iter()
                .filter(|p| is_congruence(&alg, p))
                .collect();
            assert_eq!(congruences(&alg), brute, "{}", alg.name);
        }
    }

    #[test]
    fn chains_with_a_designated_top_are_already_reduced() {
        let h = Hypermatrix {
            algebra: FiniteAlgebra::luk_chain(3),
            filter: MultisetDownset::new(vec![ms(&[2])]),
        };
        let r = leibniz(&h).unwrap();
        assert_eq!(r.classes, vec![0, 1, 2]);
        assert_eq!(r.compatible_count, 1);
    }

    #[test]
    fn reduction_collapses_indistinguishables_and_is_idempotent() {
        let (reduced, res) = reduce_model(&three_points()).unwrap();
        assert!(res.report.is_ok(), "{}", res.report);
        assert_eq!(reduced.algebra.elems, vec!["{a,b}".to_string(), "c".to_string()]);
        assert_eq!(reduced.filter, MultisetDownset::new(vec![ms(&[0])]));

        let (again, second) = reduce_model(&reduced).unwrap();
        assert_eq!(second.classes, vec![0, 1]);
        assert_eq!(again.algebra.elems, reduced.algebra.elems);
        assert_eq!(again.filter, reduced.filter);
    }
}
