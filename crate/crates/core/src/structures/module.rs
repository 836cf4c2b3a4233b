//! Modules: an ordered monoid acted on by an ordered semiring of scalars,
//! with the action respecting composition, units, sums and order on both
//! sides.  Also here: action-invariant operators, the quotient module an
//! operator induces, the kernel operator of a morphism, and the witness
//! check for cyclic-projective generators.

use super::deduction::{DeductiveOperator, validate_do};
use super::pomonoid::FinitePomonoid;
use super::semiring::FinitePoSemiring;
use super::{StructuresError, ValidationReport};
use std::collections::BTreeSet;

/// Scalars act on the carrier through `act[s * carrier_n + a]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModule {
    pub name: String,
    pub scalars: FinitePoSemiring,
    pub carrier: FinitePomonoid,
    pub act: Vec<usize>,
}

impl FiniteModule {
    pub fn star(&self, s: usize, a: usize) -> usize {
        self.act[s * self.carrier.n() + a]
    }

    /// Checks the seven action laws on top of both component validations.
    pub fn validate(&self) -> ValidationReport {
        let mut r = self.scalars.validate();
        r.merge(self.carrier.validate());
        let sn = self.scalars.n();
        let cn = self.carrier.n();
        if self.act.len() != sn * cn || self.act.iter().any(|&v| v >= cn) {
            r.push("tables", "action table malformed".to_string());
            return r;
        }
        if !r.violations.is_empty() {
            return r;
        }
        let s = &self.scalars;
        let c = &self.carrier;
        for x in 0..sn {
            for a in 0..cn {
                for y in 0..sn {
                    if self.star(s.times(x, y), a) != self.star(x, self.star(y, a)) {
                        r.push(
                            "act-composition",
                            format!("({}·{})∗{}", s.elem_name(x), s.elem_name(y), c.elem_name(a)),
                        );
                    }
                    if self.star(s.plus(x, y), a) != c.plus(self.star(x, a), self.star(y, a)) {
                        r.push(
                            "act-scalar-sum",
                            format!("({}+{})∗{}", s.elem_name(x), s.elem_name(y), c.elem_name(a)),
                        );
                    }
                    if s.le(x, y) && !c.le(self.star(x, a), self.star(y, a)) {
                        r.push(
                            "act-scalar-monotone",
                            format!("{} ≤ {} at {}", s.elem_name(x), s.elem_name(y), c.elem_name(a)),
                        );
                    }
                }
                for b in 0..cn {
                    if self.star(x, c.plus(a, b)) != c.plus(self.star(x, a), self.star(x, b)) {
                        r.push(
                            "act-carrier-sum",
                            format!("{}∗({}+{})", s.elem_name(x), c.elem_name(a), c.elem_name(b)),
                        );
                    }
                    if c.le(a, b) && !c.le(self.star(x, a), self.star(x, b)) {
                        r.push(
                            "act-carrier-monotone",
                            format!("{} ≤ {} under {}", c.elem_name(a), c.elem_name(b), s.elem_name(x)),
                        );
                    }
                }
            }
        }
        for a in 0..cn {
            if self.star(s.one, a) != a {
                r.push("act-unit", format!("1∗{}", c.elem_name(a)));
            }
            if self.star(s.zero, a) != c.zero {
                r.push("act-zero", format!("0∗{}", c.elem_name(a)));
            }
        }
        r
    }

    /// The two-scalar module over a carrier: `1` acts as identity, `0`
    /// collapses to the unit.
    ///
    /// Valid exactly when the carrier sum is idempotent: monotonicity
    /// forces `1+1 = 1` among two scalars, so the scalar-sum law reads
    /// `a = (1+1)∗a = 1∗a + 1∗a = a+a`.
    pub fn two_scalar(carrier: FinitePomonoid) -> Self {
        let cn = carrier.n();
        let mut act = vec![0; 2 * cn];
        for a in 0..cn {
            act[a] = carrier.zero;
            act[cn + a] = a;
        }
        FiniteModule {
            name: format!("M2({})", carrier.name),
            scalars: FinitePoSemiring::two(),
            carrier,
            act,
        }
    }

    /// A semiring acting on its own additive structure by multiplication on
    /// the left.  The module laws are instances of the semiring laws.
    pub fn regular(scalars: FinitePoSemiring) -> Self {
        let act = scalars.mul.clone();
        let carrier = scalars.additive_pomonoid();
        FiniteModule { name: format!("Reg({})", scalars.name), scalars, carrier, act }
    }
}

/// A carrier map between modules over the same scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleMorphism {
    pub map: Vec<usize>,
}

impl ModuleMorphism {
    pub fn identity(n: usize) -> Self {
        ModuleMorphism { map: (0..n).collect() }
    }

    /// Checks: same scalars, monotone, preserves unit, sums and the action.
    pub fn validate(&self, src: &FiniteModule, dst: &FiniteModule) -> ValidationReport {
        let mut r = ValidationReport::new();
        if src.scalars != dst.scalars {
            r.push("morphism-scalars", "source and target scalars differ".to_string());
            return r;
        }
        let cn = src.carrier.n();
        if self.map.len() != cn || self.map.iter().any(|&v| v >= dst.carrier.n()) {
            r.push("morphism-tables", "map malformed".to_string());
            return r;
        }
        let f = |a: usize| self.map[a];
        if f(src.carrier.zero) != dst.carrier.zero {
            r.push("morphism-unit", "f(0) ≠ 0".to_string());
        }
        for a in 0..cn {
            for b in 0..cn {
                if f(src.carrier.plus(a, b)) != dst.carrier.plus(f(a), f(b)) {
                    r.push(
                        "morphism-sum",
                        format!("f({}+{})", src.carrier.elem_name(a), src.carrier.elem_name(b)),
                    );
                }
                if src.carrier.le(a, b) && !dst.carrier.le(f(a), f(b)) {
                    r.push(
                        "morphism-monotone",
                        format!("{} ≤ {}", src.carrier.elem_name(a), src.carrier.elem_name(b)),
                    );
                }
            }
            for s in 0..src.scalars.n() {
                if f(src.star(s, a)) != dst.star(s, f(a)) {
                    r.push(
                        "morphism-action",
                        format!("f({}∗{})", src.scalars.elem_name(s), src.carrier.elem_name(a)),
                    );
                }
            }
        }
        r
    }
}

/// Checks that an operator commutes with the scalar action:
/// `a ∈ δ(b)` must give `σ∗a ∈ δ(σ∗b)`.
pub fn action_invariant_check(m: &FiniteModule, d: &DeductiveOperator) -> ValidationReport {
    let mut r = validate_do(&m.carrier, d);
    let cn = m.carrier.n();
    if d.n != cn {
        return r;
    }
    for b in 0..cn {
        for &a in &d.img[b] {
            for s in 0..m.scalars.n() {
                if !d.img[m.star(s, b)].contains(&m.star(s, a)) {
                    r.push(
                        "action-invariance",
                        format!(
                            "{} ∈ δ({}) but {}∗{} ∉ δ({}∗{})",
                            m.carrier.elem_name(a),
                            m.carrier.elem_name(b),
                            m.scalars.elem_name(s),
                            m.carrier.elem_name(a),
                            m.scalars.elem_name(s),
                            m.carrier.elem_name(b)
                        ),
                    );
                }
            }
        }
    }
    r
}

#[derive(Debug, Clone)]
pub struct QuotientResult {
    pub module: FiniteModule,
    /// Carrier element -> index of its image class in the quotient.
    pub class_of: Vec<usize>,
    pub report: ValidationReport,
}

fn fmt_class(p: &FinitePomonoid, s: &BTreeSet<usize>) -> String {
    let names: Vec<&str> = s.iter().map(|&a| p.elem_name(a)).collect();
    format!("{{{}}}", names.join(","))
}

/// The image module of an action-invariant operator: elements are the
/// distinct images `δ(a)` ordered by inclusion, sum and action through
/// representatives.  Well-definedness and the module laws are guaranteed by
/// theorem once the preconditions hold, so their failure is internal.
pub fn quotient_module(m: &FiniteModule, d: &DeductiveOperator) -> QuotientResult {
    let mut report = ValidationReport::new();
    let pre = action_invariant_check(m, d);
    if !pre.is_ok() {
        report.push("precondition", "operator is not an action-invariant deductive operator".to_string());
        report.merge(pre);
    }
    let cn = m.carrier.n();
    let distinct: Vec<BTreeSet<usize>> = {
        let s: BTreeSet<BTreeSet<usize>> = d.img.iter().cloned().collect();
        s.into_iter().collect()
    };
    let class_of: Vec<usize> =
        (0..cn).map(|a| distinct.iter().position(|t| *t == d.img[a]).unwrap()).collect();
    let qn = distinct.len();
    let mut leq = vec![false; qn * qn];
    for i in 0..qn {
        for j in 0..qn {
            leq[i * qn + j] = distinct[i].is_subset(&distinct[j]);
        }
    }
    let mut add = vec![usize::MAX; qn * qn];
    let sn = m.scalars.n();
    let mut act = vec![usize::MAX; sn * qn];
    for a in 0..cn {
        for b in 0..cn {
            let (i, j) = (class_of[a], class_of[b]);
            let k = class_of[m.carrier.plus(a, b)];
            let slot = &mut add[i * qn + j];
            if *slot == usize::MAX {
                *slot = k;
            } else if *slot != k {
                report.push_internal(
                    "quotient-sum-well-defined",
                    format!("{} + {}", fmt_class(&m.carrier, &distinct[i]), fmt_class(&m.carrier, &distinct[j])),
                );
            }
        }
        for s in 0..sn {
            let i = class_of[a];
            let k = class_of[m.star(s, a)];
            let slot = &mut act[s * qn + i];
            if *slot == usize::MAX {
                *slot = k;
            } else if *slot != k {
                report.push_internal(
                    "quotient-action-well-defined",
                    format!("{} ∗ {}", m.scalars.elem_name(s), fmt_class(&m.carrier, &distinct[i])),
                );
            }
        }
    }
    let carrier = FinitePomonoid {
        name: format!("{}/δ", m.carrier.name),
        elems: distinct.iter().map(|t| fmt_class(&m.carrier, t)).collect(),
        leq,
        add,
        zero: class_of[m.carrier.zero],
    };
    let module = FiniteModule {
        name: format!("{}/δ", m.name),
        scalars: m.scalars.clone(),
        carrier,
        act,
    };
    if report.is_ok() {
        let v = module.validate();
        for violation in v.violations {
            report.push_internal(format!("quotient-{}", violation.law), violation.witness);
        }
        let morph = ModuleMorphism { map: class_of.clone() };
        let mv = morph.validate(m, &module);
        for violation in mv.violations {
            report.push_internal(format!("projection-{}", violation.law), violation.witness);
        }
    }
    QuotientResult { module, class_of, report }
}

#[derive(Debug, Clone)]
pub struct KernelResult {
    /// The kernel operator `a ↦ {x : f(x) ≤ f(a)}`.
    pub dop: DeductiveOperator,
    pub quotient: QuotientResult,
    /// Whether the induced map from the quotient onto the image of `f` is a
    /// bijective morphism that also reflects order.
    pub iso_ok: bool,
    pub report: ValidationReport,
}

/// The kernel operator of a validated morphism, its quotient, and the check
/// that quotient and image are isomorphic.  All three facts are theorems,
/// so failures past the morphism validation are internal.
pub fn kernel_do(
    f: &ModuleMorphism,
    src: &FiniteModule,
    dst: &FiniteModule,
) -> Result<KernelResult, StructuresError> {
    let mv = f.validate(src, dst);
    if !mv.is_ok() {
        return Err(StructuresError::Precondition(format!("not a module morphism: {mv}")));
    }
    let mut report = ValidationReport::new();
    let cn = src.carrier.n();
    let dop = DeductiveOperator {
        n: cn,
        img: (0..cn)
            .map(|a| (0..cn).filter(|&x| dst.carrier.le(f.map[x], f.map[a])).collect())
            .collect(),
    };
    let dv = action_invariant_check(src, &dop);
    for v in dv.violations {
        report.push_internal(format!("kernel-{}", v.law), v.witness);
    }
    let quotient = quotient_module(src, &dop);
    let mut iso_ok = report.is_ok() && quotient.report.is_ok();
    // The induced map sends the class of a to f(a); check well-defined,
    // injective, order-preserving and order-reflecting (the rest of the
    // morphism laws follow from f being one).
    for a in 0..cn {
        for b in 0..cn {
            let same_class = quotient.class_of[a] == quotient.class_of[b];
            if same_class && f.map[a] != f.map[b] {
                iso_ok = false;
                report.push_internal(
                    "induced-map-well-defined",
                    format!("{} vs {}", src.carrier.elem_name(a), src.carrier.elem_name(b)),
                );
            }
            if !same_class && f.map[a] == f.map[b] {
                iso_ok = false;
                report.push_internal(
                    "induced-map-injective",
                    format!("{} vs {}", src.carrier.elem_name(a), src.carrier.elem_name(b)),
                );
            }
            let q_le = quotient
                .module
                .carrier
                .le(quotient.class_of[a], quotient.class_of[b]);
            let f_le = dst.carrier.le(f.map[a], f.map[b]);
            if q_le != f_le {
                iso_ok = false;
                report.push_internal(
                    "induced-map-order",
                    format!("{} vs {}", src.carrier.elem_name(a), src.carrier.elem_name(b)),
                );
            }
        }
    }
    Ok(KernelResult { dop, quotient, iso_ok, report })
}

/// Per-clause result of the cyclic-projective witness check: the scalar
/// `mu` must fix `v`, the orbit of `v` must be the whole carrier, and
/// comparisons of orbit elements must be reflected by `·mu` on scalars.
#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub fixes: bool,
    pub generates: bool,
    pub reflects: bool,
    pub failures: Vec<String>,
}

impl WitnessReport {
    pub fn is_ok(&self) -> bool {
        self.fixes && self.generates && self.reflects
    }
}

pub fn cyclic_projective_witness(m: &FiniteModule, mu: usize, v: usize) -> WitnessReport {
    let mut failures = Vec::new();
    let fixes = m.star(mu, v) == v;
    if !fixes {
        failures.push(format!(
            "{}∗{} = {} ≠ {}",
            m.scalars.elem_name(mu),
            m.carrier.elem_name(v),
            m.carrier.elem_name(m.star(mu, v)),
            m.carrier.elem_name(v)
        ));
    }
    let orbit: BTreeSet<usize> = (0..m.scalars.n()).map(|s| m.star(s, v)).collect();
    let generates = orbit.len() == m.carrier.n();
    if !generates {
        failures.push(format!("orbit of {} has {} of {} elements", m.carrier.elem_name(v), orbit.len(), m.carrier.n()));
    }
    let mut reflects = true;
    for s in 0..m.scalars.n() {
        for t in 0..m.scalars.n() {
            if m.carrier.le(m.star(s, v), m.star(t, v))
                && !m.scalars.le(m.scalars.times(s, mu), m.scalars.times(t, mu))
            {
                reflects = false;
                failures.push(format!(
                    "{}∗v ≤ {}∗v but {}·μ ≰ {}·μ",
                    m.scalars.elem_name(s),
                    m.scalars.elem_name(t),
                    m.scalars.elem_name(s),
                    m.scalars.elem_name(t)
                ));
            }
        }
    }
    WitnessReport { fixes, generates, reflects, failures }
}
