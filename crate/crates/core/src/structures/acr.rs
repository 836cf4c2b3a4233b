//! Set-level consequence over a small base.
//!
//! An abstract consequence relation (ACR) relates *subsets* of a base to
//! single elements; here it is stored as the closure table `X ↦ {a : X ⊢ a}`
//! over all subset masks, which is faithful by the classical correspondence
//! between consequence relations and closure operators.  The same
//! correspondence makes a closure operator share this representation, so
//! the powerset lifts of all three finite presentations in
//! [`super::deduction`] land in [`FiniteAcr`] or [`ClosureSystem`], and the
//! lift is checked to commute with every conversion by
//! [`bj_diagram_check`].

use super::deduction::{
    self, DeductiveOperator, DeductiveRelation, DeductiveSystem, enumerate_drs,
};
use super::pomonoid::FinitePomonoid;
use super::{StructuresError, ValidationReport, guard};
use std::collections::BTreeSet;

/// Largest base for which powerset tables are materialised.
const MAX_BASE: usize = 4;

/// A consequence relation between subsets of `elems` and single elements,
/// as the closure table over subset masks.  Bit `i` of a mask stands for
/// `elems[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAcr {
    pub elems: Vec<String>,
    /// `table[m]` is the closure of the subset with mask `m`; length `2^n`.
    pub table: Vec<u16>,
}

fn mask_of_set(s: &BTreeSet<usize>) -> u16 {
    s.iter().fold(0, |m, &a| m | 1 << a)
}

impl FiniteAcr {
    pub fn n(&self) -> usize {
        self.elems.len()
    }

    pub fn full_mask(&self) -> u16 {
        ((1usize << self.n()) - 1) as u16
    }

    pub fn closure(&self, mask: u16) -> u16 {
        self.table[mask as usize]
    }

    /// `X ⊢ a` for the subset with mask `mask`.
    pub fn derives(&self, mask: u16, a: usize) -> bool {
        self.closure(mask) >> a & 1 == 1
    }

    pub fn mask_name(&self, mask: u16) -> String {
        let members: Vec<&str> = (0..self.n())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| self.elems[i].as_str())
            .collect();
        format!("{{{}}}", members.join(","))
    }

    /// The discrete relation: a set yields exactly its own elements.
    pub fn identity(elems: Vec<String>) -> Result<Self, StructuresError> {
        guard("base for powerset table", elems.len(), MAX_BASE)?;
        let table = (0..1u16 << elems.len()).collect();
        Ok(FiniteAcr { elems, table })
    }

    /// The relation where every set yields everything.
    pub fn total(elems: Vec<String>) -> Result<Self, StructuresError> {
        guard("base for powerset table", elems.len(), MAX_BASE)?;
        let full = ((1usize << elems.len()) - 1) as u16;
        let table = vec![full; 1 << elems.len()];
        Ok(FiniteAcr { elems, table })
    }

    /// Least relation making each rule `premises ⟹ conclusion` fire:
    /// the closure of a set is its least superset closed under all rules.
    pub fn from_rules(
        elems: Vec<String>,
        rules: &[(&[usize], usize)],
    ) -> Result<Self, StructuresError> {
        let n = elems.len();
        guard("base for powerset table", n, MAX_BASE)?;
        for (prem, concl) in rules {
            if prem.iter().chain([concl]).any(|&a| a >= n) {
                return Err(StructuresError::Precondition(format!(
                    "rule mentions element index outside 0..{n}"
                )));
            }
        }
        let masked: Vec<(u16, u16)> = rules
            .iter()
            .map(|(prem, concl)| (prem.iter().fold(0, |m, &a| m | 1 << a), 1 << concl))
            .collect();
        let table = (0..1u16 << n)
            .map(|m| {
                let mut s = m;
                loop {
                    let before = s;
                    for &(prem, concl) in &masked {
                        if prem & !s == 0 {
                            s |= concl;
                        }
                    }
                    if s == before {
                        return s;
                    }
                }
            })
            .collect();
        Ok(FiniteAcr { elems, table })
    }

    /// Checks the three defining laws: reflexivity (a set yields its own
    /// elements), monotonicity in the premise set, and cut.
    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new();
        let n = self.n();
        if self.table.len() != 1 << n {
            r.push("tables", format!("expected {} closures, got {}", 1 << n, self.table.len()));
            return r;
        }
        let full = self.full_mask();
        for (m, &cl) in self.table.iter().enumerate() {
            if cl & !full != 0 {
                r.push(
                    "tables",
                    format!("closure of {} mentions elements outside the base", self.mask_name(m as u16)),
                );
                return r;
            }
        }
        for m in 0..self.table.len() as u16 {
            if m & !self.closure(m) != 0 {
                r.push(
                    "reflexivity",
                    format!("{} ⊄ cl{}", self.mask_name(m & !self.closure(m)), self.mask_name(m)),
                );
            }
            for m2 in 0..self.table.len() as u16 {
                if m & !m2 == 0 && self.closure(m) & !self.closure(m2) != 0 {
                    r.push(
                        "monotonicity",
                        format!("{} ⊆ {} but cl of the former ⊄ cl of the latter",
                            self.mask_name(m), self.mask_name(m2)),
                    );
                }
                if m2 & !self.closure(m) == 0 && self.closure(m2) & !self.closure(m) != 0 {
                    r.push(
                        "cut",
                        format!("{} ⊢ each of {} but not all of cl{}",
                            self.mask_name(m), self.mask_name(m2), self.mask_name(m2)),
                    );
                }
            }
        }
        r
    }
}

/// A family of subsets of a small base containing the full set and closed
/// under intersection, stored as masks over `elems`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureSystem {
    pub elems: Vec<String>,
    pub members: BTreeSet<u16>,
}

impl ClosureSystem {
    pub fn n(&self) -> usize {
        self.elems.len()
    }

    pub fn full_mask(&self) -> u16 {
        ((1usize << self.n()) - 1) as u16
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new();
        let full = self.full_mask();
        if let Some(&bad) = self.members.iter().find(|&&m| m & !full != 0) {
            r.push("members", format!("member mask {bad:#b} mentions elements outside the base"));
            return r;
        }
        if !self.members.contains(&full) {
            r.push("contains-base", "the full set is not a member".to_string());
        }
        for &a in &self.members {
            for &b in &self.members {
                if !self.members.contains(&(a & b)) {
                    r.push(
                        "intersection-closed",
                        format!("members {a:#b} and {b:#b} meet outside the family"),
                    );
                }
            }
        }
        r
    }
}

/// The closed sets of a consequence relation, as a family.
pub fn acr_to_closure_system(a: &FiniteAcr) -> ClosureSystem {
    ClosureSystem {
        elems: a.elems.clone(),
        members: (0..a.table.len() as u16).filter(|&m| a.closure(m) == m).collect(),
    }
}

/// The consequence relation of a family: the closure of a set is the
/// intersection of the members covering it (the full set when none does).
pub fn closure_system_to_acr(c: &ClosureSystem) -> FiniteAcr {
    let full = c.full_mask();
    let table = (0..1u16 << c.n())
        .map(|m| c.members.iter().filter(|&&mem| m & !mem == 0).fold(full, |acc, &mem| acc & mem))
        .collect();
    FiniteAcr { elems: c.elems.clone(), table }
}

/// Lifts a relation between elements to one between sets and elements:
/// a set yields whatever any single member yields.  For a valid input the
/// result is a valid [`FiniteAcr`].
pub fn companion_of_dr(
    p: &FinitePomonoid,
    d: &DeductiveRelation,
) -> Result<FiniteAcr, StructuresError> {
    guard("carrier for powerset lift", p.n(), MAX_BASE)?;
    let n = p.n();
    let table = (0..1u16 << n)
        .map(|m| {
            let mut cl = 0u16;
            for y in 0..n {
                if m >> y & 1 == 1 {
                    for b in 0..n {
                        if d.derives(y, b) {
                            cl |= 1 << b;
                        }
                    }
                }
            }
            cl
        })
        .collect();
    Ok(FiniteAcr { elems: p.elems.clone(), table })
}

/// Lifts an operator pointwise: the closure of a set is the union of the
/// images of its members.  The result is the closure operator of the
/// companion relation, which shares the [`FiniteAcr`] representation.
pub fn companion_of_do(
    p: &FinitePomonoid,
    d: &DeductiveOperator,
) -> Result<FiniteAcr, StructuresError> {
    guard("carrier for powerset lift", p.n(), MAX_BASE)?;
    let n = p.n();
    let imgs: Vec<u16> = d.img.iter().map(mask_of_set).collect();
    let table = (0..1u16 << n)
        .map(|m| (0..n).filter(|&y| m >> y & 1 == 1).fold(0, |cl, y| cl | imgs[y]))
        .collect();
    Ok(FiniteAcr { elems: p.elems.clone(), table })
}

/// Lifts a family to all unions of its subfamilies (the empty union
/// included).  For a valid input the result is a valid [`ClosureSystem`].
pub fn companion_of_ds(
    p: &FinitePomonoid,
    c: &DeductiveSystem,
) -> Result<ClosureSystem, StructuresError> {
    guard("carrier for powerset lift", p.n(), MAX_BASE)?;
    let mut unions = BTreeSet::from([0u16]);
    for m in &c.members {
        let mm = mask_of_set(m);
        let with: Vec<u16> = unions.iter().map(|&u| u | mm).collect();
        unions.extend(with);
    }
    Ok(ClosureSystem { elems: p.elems.clone(), members: unions })
}

#[derive(Debug, Clone)]
pub struct DiagramReport {
    pub relations_checked: usize,
    pub squares_checked: usize,
    pub report: ValidationReport,
}

/// For every relation on `p`, lifts all three presentations to the set
/// level and verifies that lifting commutes with every conversion: the six
/// squares relation↔operator, relation↔system and operator↔system, in both
/// directions.  Each lifted object is also re-validated, and the closed
/// sets of the lifted relation are compared against the independently
/// computed theories.  All of this is theoremework, so any failure is
/// flagged as an internal error.
pub fn bj_diagram_check(p: &FinitePomonoid) -> Result<DiagramReport, StructuresError> {
    guard("carrier for companion diagrams", p.n(), MAX_BASE)?;
    let mut report = p.validate();
    if !report.is_ok() {
        return Ok(DiagramReport { relations_checked: 0, squares_checked: 0, report });
    }
    let drs = enumerate_drs(p, MAX_BASE, 1 << 16)?.drs;
    let mut squares = 0;
    for (i, d) in drs.iter().enumerate() {
        let dop = deduction::dr_to_do(d);
        let ds = deduction::dr_to_ds(d);
        let acr = companion_of_dr(p, d)?;
        let clop = companion_of_do(p, &dop)?;
        let clos = companion_of_ds(p, &ds)?;
        let v = acr.validate();
        if !v.is_ok() {
            report.push_internal("companion-acr", format!("relation #{i}: {v}"));
        }
        let v = clos.validate();
        if !v.is_ok() {
            report.push_internal("companion-closure-system", format!("relation #{i}: {v}"));
        }
        // The conversion between a set-level relation and its closure
        // operator is the identity on this representation, so those sides
        // of the squares need no code.
        let checks: [(&str, bool); 6] = [
            ("bj-square-rel-op", clop == acr),
            ("bj-square-rel-sys", acr_to_closure_system(&acr) == clos),
            ("bj-square-op-sys", acr_to_closure_system(&clop) == clos),
            ("bj-square-op-rel", companion_of_dr(p, &deduction::do_to_dr(&dop))? == clop),
            ("bj-square-sys-rel", closure_system_to_acr(&clos) == acr),
            ("bj-square-sys-op", companion_of_do(p, &deduction::ds_to_do(&ds))? == clop),
        ];
        for (law, ok) in checks {
            squares += 1;
            if !ok {
                report.push_internal(law, format!("relation #{i}"));
            }
        }
        // A set is closed for the lifted relation exactly when it is a
        // theory of the original one.
        let closed: BTreeSet<u16> =
            (0..acr.table.len() as u16).filter(|&m| acr.closure(m) == m).collect();
        let theories: BTreeSet<u16> =
            deduction::theories(p, d)?.theories.iter().map(mask_of_set).collect();
        if closed != theories {
            report.push_internal("theories-are-companion-closed", format!("relation #{i}"));
        }
    }
    Ok(DiagramReport { relations_checked: drs.len(), squares_checked: squares, report })
}

/// A relation between subsets induced by a set-level relation, on the
/// powerset structure of the base under union and inclusion.
#[derive(Debug, Clone)]
pub struct LiftedDr {
    pub pomonoid: FinitePomonoid,
    pub dr: DeductiveRelation,
    pub report: ValidationReport,
}

/// Turns a set-level relation into the relation `X ⊢′ Y` ⟺ every element
/// of `Y` follows from `X`, over the powerset of the base.  The result is
/// validated; a failure on a valid input is an internal error, because the
/// lifted relation always satisfies the three laws of the finite kind.
pub fn dr_from_acr(a: &FiniteAcr) -> Result<LiftedDr, StructuresError> {
    guard("base for the powerset relation", a.n(), MAX_BASE)?;
    if a.table.len() != 1 << a.n() {
        return Err(StructuresError::Precondition(format!(
            "closure table has {} entries, expected {}",
            a.table.len(),
            1 << a.n()
        )));
    }
    let base: Vec<&str> = a.elems.iter().map(|s| s.as_str()).collect();
    let pomonoid = FinitePomonoid::powerset(&base)?;
    let nn = 1usize << a.n();
    let mut rel = vec![false; nn * nn];
    for x in 0..nn {
        let cl = a.closure(x as u16);
        for y in 0..nn {
            rel[x * nn + y] = y as u16 & !cl == 0;
        }
    }
    let dr = DeductiveRelation { n: nn, rel };
    let mut report = a.validate();
    let input_ok = report.is_ok();
    let v = deduction::validate_dr(&pomonoid, &dr);
    for viol in v.violations.into_iter().chain(v.internal_errors) {
        if input_ok {
            report.push_internal(format!("lifted-{}", viol.law), viol.witness);
        } else {
            report.push(format!("lifted-{}", viol.law), viol.witness);
        }
    }
    Ok(LiftedDr { pomonoid, dr, report })
}
