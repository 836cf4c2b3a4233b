//! Consequence on a finite ordered monoid, in its three equivalent guises:
//! a binary relation, a one-step closure operator, and a family of closed
//! sets.  The conversions between the three are mutually inverse and
//! order-preserving; `trinity` verifies this on concrete inputs, and
//! `enumerate_drs` lists every relation on a small carrier.

use super::pomonoid::FinitePomonoid;
use super::{StructuresError, ValidationReport, guard};
use std::collections::BTreeSet;

/// `rel[a*n+b]` holds when `b` follows from `a`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DeductiveRelation {
    pub n: usize,
    pub rel: Vec<bool>,
}

impl DeductiveRelation {
    pub fn derives(&self, a: usize, b: usize) -> bool {
        self.rel[a * self.n + b]
    }

    /// The least candidate on `p`: `a ⊢ b` exactly when `b ≤ a`.
    pub fn geq_of(p: &FinitePomonoid) -> Self {
        let n = p.n();
        let mut rel = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                rel[a * n + b] = p.le(b, a);
            }
        }
        DeductiveRelation { n, rel }
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut rel = vec![false; n * n];
        for &(a, b) in pairs {
            rel[a * n + b] = true;
        }
        DeductiveRelation { n, rel }
    }
}

/// `img[a]` is the set of consequences of `a` (always containing `a`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DeductiveOperator {
    pub n: usize,
    pub img: Vec<BTreeSet<usize>>,
}

/// A family of subsets of the carrier, each downward closed in the order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DeductiveSystem {
    pub n: usize,
    pub members: BTreeSet<BTreeSet<usize>>,
}

fn fmt_set(p: &FinitePomonoid, s: &BTreeSet<usize>) -> String {
    let names: Vec<&str> = s.iter().map(|&a| p.elem_name(a)).collect();
    format!("{{{}}}", names.join(","))
}

/// Checks the three defining laws of a deductive relation and, when they
/// hold, the two derived laws that follow from them by theorem (cut and
/// premise weakening).  A derived-law failure on an axiom-clean relation is
/// reported as an internal error: it cannot come from bad input.
pub fn validate_dr(p: &FinitePomonoid, d: &DeductiveRelation) -> ValidationReport {
    let mut r = ValidationReport::new();
    let n = p.n();
    if d.n != n || d.rel.len() != n * n {
        r.push("tables", format!("relation is {}x{}, carrier has {} elements", d.n, d.n, n));
        return r;
    }
    let name = |a: usize| p.elem_name(a);
    for a in 0..n {
        for b in 0..n {
            if p.le(a, b) && !d.derives(b, a) {
                r.push(
                    "generalised-reflexivity",
                    format!("{} ≤ {} but {} ⊬ {}", name(a), name(b), name(b), name(a)),
                );
            }
            for c in 0..n {
                if d.derives(a, b) && d.derives(b, c) && !d.derives(a, c) {
                    r.push(
                        "transitivity",
                        format!("{} ⊢ {} ⊢ {} but {} ⊬ {}", name(a), name(b), name(c), name(a), name(c)),
                    );
                }
                if d.derives(a, b) && !d.derives(p.plus(a, c), p.plus(b, c)) {
                    r.push(
                        "compatibility",
                        format!("{} ⊢ {} but {}+{} ⊬ {}+{}", name(a), name(b), name(a), name(c), name(b), name(c)),
                    );
                }
            }
        }
    }
    if r.violations.is_empty() {
        // Derived laws, guaranteed by theorem once the three axioms hold.
        for a in 0..n {
            for b in 0..n {
                if !d.derives(a, b) {
                    continue;
                }
                for c in 0..n {
                    if !d.derives(p.plus(c, a), b) {
                        r.push_internal(
                            "premise-weakening",
                            format!("{} ⊢ {} but {}+{} ⊬ {}", name(a), name(b), name(c), name(a), name(b)),
                        );
                    }
                    for e in 0..n {
                        if d.derives(p.plus(c, b), e) && !d.derives(p.plus(c, a), e) {
                            r.push_internal(
                                "cut",
                                format!(
                                    "{} ⊢ {} and {}+{} ⊢ {} but {}+{} ⊬ {}",
                                    name(a), name(b), name(c), name(b), name(e), name(c), name(a), name(e)
                                ),
                            );
                        }
                    }
                }
            }
        }
    }
    r
}

/// Checks the four defining laws of a deductive operator.
pub fn validate_do(p: &FinitePomonoid, d: &DeductiveOperator) -> ValidationReport {
    let mut r = ValidationReport::new();
    let n = p.n();
    if d.n != n || d.img.len() != n {
        r.push("tables", format!("operator over {} elements, carrier has {}", d.img.len(), n));
        return r;
    }
    let name = |a: usize| p.elem_name(a);
    for a in 0..n {
        if !d.img[a].contains(&a) {
            r.push("enlargement", format!("{} ∉ δ({})", name(a), name(a)));
        }
        for b in 0..n {
            if p.le(a, b) && !d.img[a].is_subset(&d.img[b]) {
                r.push("order-preservation", format!("{} ≤ {} but δ({}) ⊄ δ({})", name(a), name(b), name(a), name(b)));
            }
            if d.img[b].contains(&a) {
                if !d.img[a].is_subset(&d.img[b]) {
                    r.push("idempotency", format!("{} ∈ δ({}) but δ({}) ⊄ δ({})", name(a), name(b), name(a), name(b)));
                }
                for c in 0..n {
                    if !d.img[p.plus(b, c)].contains(&p.plus(a, c)) {
                        r.push(
                            "compatibility",
                            format!("{} ∈ δ({}) but {}+{} ∉ δ({}+{})", name(a), name(b), name(a), name(c), name(b), name(c)),
                        );
                    }
                }
            }
        }
    }
    r
}

/// The member of `c` closure: intersection of all members containing `x`,
/// the whole carrier when none does.
fn system_closure(n: usize, c: &DeductiveSystem, x: usize) -> BTreeSet<usize> {
    let mut acc: Option<BTreeSet<usize>> = None;
    for m in &c.members {
        if m.contains(&x) {
            acc = Some(match acc {
                None => m.clone(),
                Some(prev) => prev.intersection(m).cloned().collect(),
            });
        }
    }
    acc.unwrap_or_else(|| (0..n).collect())
}

/// Checks the defining laws of a deductive system: members are downward
/// closed, the family is exactly the family of point closures, and point
/// closure is compatible with translation.
pub fn validate_ds(p: &FinitePomonoid, c: &DeductiveSystem) -> ValidationReport {
    let mut r = ValidationReport::new();
    let n = p.n();
    if c.n != n {
        r.push("tables", format!("system over {} elements, carrier has {}", c.n, n));
        return r;
    }
    for m in &c.members {
        if let Some(&bad) = m.iter().find(|&&a| a >= n) {
            r.push("members", format!("element index {bad} out of range"));
            return r;
        }
        for &a in m {
            for b in 0..n {
                if p.le(b, a) && !m.contains(&b) {
                    r.push(
                        "members-downward-closed",
                        format!("{} ∈ {} but {} ∉", p.elem_name(a), fmt_set(p, m), p.elem_name(b)),
                    );
                }
            }
        }
    }
    let closures: Vec<BTreeSet<usize>> = (0..n).map(|x| system_closure(n, c, x)).collect();
    let closure_family: BTreeSet<BTreeSet<usize>> = closures.iter().cloned().collect();
    if closure_family != c.members {
        r.push(
            "point-closures-exhaust-family",
            format!("{} members vs {} point closures", c.members.len(), closure_family.len()),
        );
    }
    for x in 0..n {
        for y in 0..n {
            if closures[x].is_subset(&closures[y]) {
                for z in 0..n {
                    if !system_closure(n, c, p.plus(x, z)).is_subset(&system_closure(n, c, p.plus(y, z))) {
                        r.push(
                            "closure-compatibility",
                            format!(
                                "cl({}) ⊆ cl({}) but cl({}+{}) ⊄ cl({}+{})",
                                p.elem_name(x), p.elem_name(y), p.elem_name(x), p.elem_name(z), p.elem_name(y), p.elem_name(z)
                            ),
                        );
                    }
                }
            }
        }
    }
    r
}

pub fn dr_to_do(d: &DeductiveRelation) -> DeductiveOperator {
    let n = d.n;
    DeductiveOperator {
        n,
        img: (0..n).map(|a| (0..n).filter(|&b| d.derives(a, b)).collect()).collect(),
    }
}

pub fn do_to_dr(d: &DeductiveOperator) -> DeductiveRelation {
    let n = d.n;
    let mut rel = vec![false; n * n];
    for a in 0..n {
        for &b in &d.img[a] {
            rel[a * n + b] = true;
        }
    }
    DeductiveRelation { n, rel }
}

pub fn do_to_ds(d: &DeductiveOperator) -> DeductiveSystem {
    DeductiveSystem { n: d.n, members: d.img.iter().cloned().collect() }
}

pub fn ds_to_do(c: &DeductiveSystem) -> DeductiveOperator {
    let n = c.n;
    DeductiveOperator { n, img: (0..n).map(|x| system_closure(n, c, x)).collect() }
}

pub fn dr_to_ds(d: &DeductiveRelation) -> DeductiveSystem {
    do_to_ds(&dr_to_do(d))
}

pub fn ds_to_dr(c: &DeductiveSystem) -> DeductiveRelation {
    do_to_dr(&ds_to_do(c))
}

/// One of the three presentations of a consequence.
#[derive(Debug, Clone)]
pub enum TrinityInput {
    Rel(DeductiveRelation),
    Op(DeductiveOperator),
    Sys(DeductiveSystem),
}

#[derive(Debug, Clone)]
pub struct TrinityReport {
    pub dr: DeductiveRelation,
    pub dop: DeductiveOperator,
    pub ds: DeductiveSystem,
    /// Each named conversion cycle and whether it returned to its start.
    pub roundtrips: Vec<(String, bool)>,
    pub validation: ValidationReport,
}

impl TrinityReport {
    pub fn all_roundtrips_ok(&self) -> bool {
        self.roundtrips.iter().all(|(_, ok)| *ok)
    }
}

/// Converts the input into all three presentations and checks every
/// conversion cycle on it.  The input is validated first; conversions of an
/// invalid input are not meaningful.
pub fn trinity(p: &FinitePomonoid, input: &TrinityInput) -> TrinityReport {
    let (dr, validation) = match input {
        TrinityInput::Rel(d) => (d.clone(), validate_dr(p, d)),
        TrinityInput::Op(d) => (do_to_dr(d), validate_do(p, d)),
        TrinityInput::Sys(c) => (ds_to_dr(c), validate_ds(p, c)),
    };
    let dop = dr_to_do(&dr);
    let ds = dr_to_ds(&dr);
    let roundtrips = vec![
        ("rel->op->rel".to_string(), do_to_dr(&dr_to_do(&dr)) == dr),
        ("rel->sys->rel".to_string(), ds_to_dr(&dr_to_ds(&dr)) == dr),
        ("op->rel->op".to_string(), dr_to_do(&do_to_dr(&dop)) == dop),
        ("op->sys->op".to_string(), ds_to_do(&do_to_ds(&dop)) == dop),
        ("sys->op->sys".to_string(), do_to_ds(&ds_to_do(&ds)) == ds),
        ("sys->rel->sys".to_string(), dr_to_ds(&ds_to_dr(&ds)) == ds),
    ];
    TrinityReport { dr, dop, ds, roundtrips, validation }
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub drs: Vec<DeductiveRelation>,
    pub truncated: bool,
}

/// Lists every deductive relation on `p` in ascending lexicographic order of
/// the flattened relation matrix (`false` before `true`, row-major).
///
/// Carriers above `max_carrier` (default 5) are refused; at most `cap`
/// relations are returned, with `truncated` set when the cap cut the list
/// short.  Only the pairs not forced by generalised reflexivity are
/// searched, so the candidate space is `2^(n² - |≥|)`.
pub fn enumerate_drs(
    p: &FinitePomonoid,
    max_carrier: usize,
    cap: usize,
) -> Result<Enumeration, StructuresError> {
    guard("carrier for relation enumeration", p.n(), max_carrier)?;
    let n = p.n();
    let base = DeductiveRelation::geq_of(p);
    let free: Vec<usize> =
        (0..n * n).filter(|&i| !base.rel[i]).collect();
    let mut out = Vec::new();
    let mut truncated = false;
    // Counting over the free positions, earlier position = more significant
    // bit, yields exactly the lexicographic order over full matrices.
    let total = 1u64 << free.len();
    for bits in 0..total {
        let mut cand = base.clone();
        for (j, &pos) in free.iter().enumerate() {
            if bits >> (free.len() - 1 - j) & 1 == 1 {
                cand.rel[pos] = true;
            }
        }
        if validate_dr(p, &cand).is_ok() {
            if out.len() == cap {
                truncated = true;
                break;
            }
            out.push(cand);
        }
    }
    Ok(Enumeration { drs: out, truncated })
}

/// Pointwise intersection of images; deductive operators are closed under
/// it, so a validation failure of the result is an internal error.
pub fn do_meet(
    p: &FinitePomonoid,
    a: &DeductiveOperator,
    b: &DeductiveOperator,
) -> (DeductiveOperator, ValidationReport) {
    let met = DeductiveOperator {
        n: a.n,
        img: a.img.iter().zip(&b.img).map(|(x, y)| x.intersection(y).cloned().collect()).collect(),
    };
    let mut report = ValidationReport::new();
    if validate_do(p, a).is_ok() && validate_do(p, b).is_ok() {
        let inner = validate_do(p, &met);
        for v in inner.violations {
            report.push_internal(format!("meet-{}", v.law), v.witness);
        }
    } else {
        report.push("precondition", "meet of operators that do not validate".to_string());
    }
    (met, report)
}

/// Everything the theory machinery of one relation yields: all closed
/// upsets, the point theories, the theorems, and the quotient structure the
/// point theories form.
#[derive(Debug, Clone)]
pub struct TheoriesReport {
    /// Every subset closed under the relation (`a ∈ T` and `a ⊢ b` imply `b ∈ T`).
    pub theories: Vec<BTreeSet<usize>>,
    /// `principal[a]` is the set of consequences of `a`.
    pub principal: Vec<BTreeSet<usize>>,
    /// Consequences of the unit.
    pub theorems: BTreeSet<usize>,
    /// The distinct point theories under inclusion, with the induced sum.
    pub quotient: FinitePomonoid,
    /// Element -> index of its point theory in `quotient`.
    pub class_of: Vec<usize>,
    pub report: ValidationReport,
}

/// Computes the closed sets and the point-theory quotient of a validated
/// relation.  By theorem the quotient is again a structure of the same kind
/// and the class map is a surjective monotone unit-preserving morphism;
/// failures of either are internal errors.
pub fn theories(p: &FinitePomonoid, d: &DeductiveRelation) -> Result<TheoriesReport, StructuresError> {
    guard("carrier for theory enumeration", p.n(), 16)?;
    let n = p.n();
    let mut report = validate_dr(p, d);
    let principal: Vec<BTreeSet<usize>> =
        (0..n).map(|a| (0..n).filter(|&b| d.derives(a, b)).collect()).collect();
    let mut theories_list = Vec::new();
    for mask in 0u32..1 << n {
        let t: BTreeSet<usize> = (0..n).filter(|&a| mask >> a & 1 == 1).collect();
        let closed = t.iter().all(|&a| principal[a].is_subset(&t));
        if closed {
            theories_list.push(t);
        }
    }
    // Every theory is a union of point theories.
    for t in &theories_list {
        let union: BTreeSet<usize> =
            t.iter().flat_map(|&a| principal[a].iter().cloned()).collect();
        if union != *t {
            report.push_internal("theory-union-of-principals", fmt_set(p, t));
        }
    }
    let distinct: Vec<BTreeSet<usize>> = {
        let s: BTreeSet<BTreeSet<usize>> = principal.iter().cloned().collect();
        s.into_iter().collect()
    };
    let class_of: Vec<usize> =
        (0..n).map(|a| distinct.iter().position(|t| *t == principal[a]).unwrap()).collect();
    let m = distinct.len();
    let mut leq = vec![false; m * m];
    let mut add = vec![0; m * m];
    for i in 0..m {
        for j in 0..m {
            leq[i * m + j] = distinct[i].is_subset(&distinct[j]);
        }
    }
    // The sum of point theories via representatives, checking independence
    // of the choice.
    for i in 0..m {
        for j in 0..m {
            let mut image: Option<usize> = None;
            for a in 0..n {
                for b in 0..n {
                    if class_of[a] == i && class_of[b] == j {
                        let k = class_of[p.plus(a, b)];
                        match image {
                            None => image = Some(k),
                            Some(prev) if prev != k => {
                                report.push_internal(
                                    "quotient-sum-well-defined",
                                    format!("classes {i}+{j} depend on representatives"),
                                );
                            }
                            _ => {}
                        }
                    }
                }
            }
            add[i * m + j] = image.expect("every class has a representative");
        }
    }
    let quotient = FinitePomonoid {
        name: format!("Th({})", p.name),
        elems: distinct.iter().map(|t| fmt_set(p, t)).collect(),
        leq,
        add,
        zero: class_of[p.zero],
    };
    if report.violations.is_empty() {
        let q = quotient.validate();
        for v in q.violations {
            report.push_internal(format!("quotient-{}", v.law), v.witness);
        }
        // The class map is monotone: a ≤ b must give Th(a) ⊆ Th(b).
        for a in 0..n {
            for b in 0..n {
                if p.le(a, b) && !quotient.le(class_of[a], class_of[b]) {
                    report.push_internal(
                        "class-map-monotone",
                        format!("{} ≤ {}", p.elem_name(a), p.elem_name(b)),
                    );
                }
            }
        }
        // And a ⊢ b exactly when Th(b) ⊆ Th(a).
        for a in 0..n {
            for b in 0..n {
                if d.derives(a, b) != quotient.le(class_of[b], class_of[a]) {
                    report.push_internal(
                        "derivability-mirrors-inclusion",
                        format!("{} vs {}", p.elem_name(a), p.elem_name(b)),
                    );
                }
            }
        }
    }
    Ok(TheoriesReport {
        theories: theories_list,
        principal,
        theorems: (0..n).filter(|&b| d.derives(p.zero, b)).collect(),
        quotient,
        class_of,
        report,
    })
}
