//! Finite algebras interpreting the connective language.
//!
//! An algebra may interpret only part of the signature: each operation table
//! is optional and constants are a name→element map. Evaluation reports a
//! `MissingOperation` error when a formula uses an uninterpreted connective,
//! so partial algebras (for example a bare two-element carrier with two named
//! constants) are first-class models.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{MAX_VALUATIONS, SemanticsError};
use crate::formula::{Consecution, Formula};
use crate::multiset::Multiset;
use crate::structures::ValidationReport;

/// The exact rational i/(n−1), the value of element `i` of `luk_chain(n)`.
pub fn luk_value(n: usize, i: usize) -> BigRational {
    BigRational::new(BigInt::from(i), BigInt::from(n - 1))
}

/// A finite algebra: named carrier, optional operation tables (row-major,
/// `table[a * n + b]`), an optional unit, and interpreted constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    pub name: String,
    pub elems: Vec<String>,
    pub meet: Option<Vec<usize>>,
    pub join: Option<Vec<usize>>,
    pub fuse: Option<Vec<usize>>,
    pub imp: Option<Vec<usize>>,
    pub one: Option<usize>,
    pub consts: BTreeMap<String, usize>,
}

impl FiniteAlgebra {
    pub fn n(&self) -> usize {
        self.elems.len()
    }

    /// The n-element Łukasiewicz chain: elements named 0, 1/(n−1), …, 1 with
    /// min, max, the bounded product x⊗y = max(0, x+y−1) and its residual
    /// x→y = min(1, 1−x+y), all computed on the index grid.
    pub fn luk_chain(n: usize) -> FiniteAlgebra {
        assert!(n >= 2, "a chain needs at least the two bounds");
        let top = n - 1;
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        let mut fuse = vec![0; n * n];
        let mut imp = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                meet[a * n + b] = a.min(b);
                join[a * n + b] = a.max(b);
                fuse[a * n + b] = (a + b).saturating_sub(top);
                imp[a * n + b] = if a <= b { top } else { top - (a - b) };
            }
        }
        FiniteAlgebra {
            name: format!("Luk{n}"),
            elems: (0..n).map(|i| luk_value(n, i).to_string()).collect(),
            meet: Some(meet),
            join: Some(join),
            fuse: Some(fuse),
            imp: Some(imp),
            one: Some(top),
            consts: BTreeMap::new(),
        }
    }

    /// A bare two-element carrier with no operations, just the constants
    /// `c0` and `c1` naming its elements.
    pub fn two_constants() -> FiniteAlgebra {
        FiniteAlgebra {
            name: "B2".to_string(),
            elems: vec!["0".to_string(), "1".to_string()],
            meet: None,
            join: None,
            fuse: None,
            imp: None,
            one: None,
            consts: BTreeMap::from([("c0".to_string(), 0), ("c1".to_string(), 1)]),
        }
    }

    fn op(&self, table: &Option<Vec<usize>>, name: &str, a: usize, b: usize) -> Result<usize, SemanticsError> {
        match table {
            Some(t) => Ok(t[a * self.n() + b]),
            None => Err(SemanticsError::MissingOperation { op: name.to_string(), algebra: self.name.clone() }),
        }
    }

    /// Element order induced by the lattice: a ≤ b iff a∧b = a.
    pub fn le(&self, a: usize, b: usize) -> Result<bool, SemanticsError> {
        Ok(self.op(&self.meet, "&", a, b)? == a)
    }

    /// Evaluates a formula. Variables are looked up first among the
    /// interpreted constants, then in the valuation.
    pub fn eval(&self, f: &Formula, val: &BTreeMap<String, usize>) -> Result<usize, SemanticsError> {
        match f {
            Formula::Var(v) => self
                .consts
                .get(v)
                .or_else(|| val.get(v))
                .copied()
                .ok_or_else(|| SemanticsError::UnboundVariable(v.clone())),
            Formula::One => self.one.ok_or_else(|| SemanticsError::MissingOperation {
                op: "1".to_string(),
                algebra: self.name.clone(),
            }),
            Formula::Meet(a, b) => {
                let (x, y) = (self.eval(a, val)?, self.eval(b, val)?);
                self.op(&self.meet, "&", x, y)
            }
            Formula::Join(a, b) => {
                let (x, y) = (self.eval(a, val)?, self.eval(b, val)?);
                self.op(&self.join, "|", x, y)
            }
            Formula::Fusion(a, b) => {
                let (x, y) = (self.eval(a, val)?, self.eval(b, val)?);
                self.op(&self.fuse, "*", x, y)
            }
            Formula::Imp(a, b) => {
                let (x, y) = (self.eval(a, val)?, self.eval(b, val)?);
                self.op(&self.imp, "->", x, y)
            }
        }
    }

    /// Image of a formula multiset under a valuation, as a multiset of
    /// elements (collisions accumulate).
    pub fn eval_multiset(
        &self,
        m: &Multiset<Formula>,
        val: &BTreeMap<String, usize>,
    ) -> Result<Multiset<usize>, SemanticsError> {
        let mut out = Multiset::new();
        for (f, cnt) in m.iter() {
            out.insert_many(self.eval(f, val)?, cnt.clone());
        }
        Ok(out)
    }

    /// Fusion of all occurrences of a formula multiset (the empty fusion is
    /// the unit).
    pub fn eval_fusion(
        &self,
        m: &Multiset<Formula>,
        val: &BTreeMap<String, usize>,
    ) -> Result<usize, SemanticsError> {
        let mut acc = self.one.ok_or_else(|| SemanticsError::MissingOperation {
            op: "1".to_string(),
            algebra: self.name.clone(),
        })?;
        for f in m.occurrences() {
            let v = self.eval(f, val)?;
            acc = self.op(&self.fuse, "*", acc, v)?;
        }
        Ok(acc)
    }

    /// Variables of a consecution that still need a value once the
    /// interpreted constants are fixed.
    pub fn free_vars(&self, c: &Consecution) -> BTreeSet<String> {
        c.vars().into_iter().filter(|v| !self.consts.contains_key(v)).collect()
    }

    /// The full valuation grid over `vars`, in lexicographic order (first
    /// variable slowest). Guarded against astronomically large grids.
    pub fn valuations(&self, vars: &BTreeSet<String>) -> Result<Vec<BTreeMap<String, usize>>, SemanticsError> {
        let count = self.n().checked_pow(vars.len() as u32).unwrap_or(usize::MAX);
        if count > MAX_VALUATIONS {
            return Err(SemanticsError::SizeGuard {
                what: format!("valuation grid over {} variables in {}", vars.len(), self.name),
                got: count,
                limit: MAX_VALUATIONS,
            });
        }
        let names: Vec<&String> = vars.iter().collect();
        let mut out = Vec::with_capacity(count);
        let mut idx = vec![0usize; names.len()];
        loop {
            out.push(names.iter().zip(&idx).map(|(v, i)| (v.to_string(), *i)).collect());
            let mut k = names.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < self.n() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    /// Checks the commutative integral residuated-lattice laws. Requires the
    /// whole signature to be interpreted; any missing piece is reported and
    /// the law checks are skipped.
    pub fn validate_rl(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let n = self.n();
        for (tname, t) in [("&", &self.meet), ("|", &self.join), ("*", &self.fuse), ("->", &self.imp)] {
            match t {
                None => report.push("total-signature", format!("operation `{tname}` is not interpreted")),
                Some(t) if t.len() != n * n => {
                    report.push("total-signature", format!("table for `{tname}` has {} entries, want {}", t.len(), n * n))
                }
                Some(t) => {
                    if let Some(bad) = t.iter().find(|&&x| x >= n) {
                        report.push("total-signature", format!("table for `{tname}` mentions element {bad} out of range"));
                    }
                }
            }
        }
        match self.one {
            None => report.push("total-signature", "the unit `1` is not interpreted".to_string()),
            Some(o) if o >= n => report.push("total-signature", format!("unit {o} out of range")),
            _ => {}
        }
        if !report.is_ok() {
            return report;
        }
        let (meet, join) = (self.meet.as_ref().unwrap(), self.join.as_ref().unwrap());
        let (fuse, imp) = (self.fuse.as_ref().unwrap(), self.imp.as_ref().unwrap());
        let one = self.one.unwrap();
        let e = |i: usize| &self.elems[i];
        for a in 0..n {
            if meet[a * n + a] != a {
                report.push("lattice-idempotent", format!("{0}∧{0} ≠ {0}", e(a)));
            }
            if fuse[a * n + one] != a {
                report.push("monoid-unit", format!("{}·1 ≠ {0}", e(a)));
            }
            if meet[a * n + one] != a {
                report.push("unit-top", format!("{} ≰ 1", e(a)));
            }
            for b in 0..n {
                if meet[a * n + b] != meet[b * n + a] {
                    report.push("lattice-commutative", format!("{}∧{} asymmetric", e(a), e(b)));
                }
                if join[a * n + b] != join[b * n + a] {
                    report.push("lattice-commutative", format!("{}∨{} asymmetric", e(a), e(b)));
                }
                if fuse[a * n + b] != fuse[b * n + a] {
                    report.push("monoid-commutative", format!("{}·{} asymmetric", e(a), e(b)));
                }
                if meet[a * n + join[a * n + b]] != a {
                    report.push("lattice-absorption", format!("{}∧({0}∨{}) ≠ {0}", e(a), e(b)));
                }
                if join[a * n + meet[a * n + b]] != a {
                    report.push("lattice-absorption", format!("{}∨({0}∧{}) ≠ {0}", e(a), e(b)));
                }
                if (meet[a * n + b] == a) != (join[a * n + b] == b) {
                    report.push("lattice-order", format!("∧ and ∨ disagree about {} ≤ {}", e(a), e(b)));
                }
                for c in 0..n {
                    if meet[meet[a * n + b] * n + c] != meet[a * n + meet[b * n + c]] {
                        report.push("lattice-associative", format!("∧ at ({},{},{})", e(a), e(b), e(c)));
                    }
                    if join[join[a * n + b] * n + c] != join[a * n + join[b * n + c]] {
                        report.push("lattice-associative", format!("∨ at ({},{},{})", e(a), e(b), e(c)));
                    }
                    if fuse[fuse[a * n + b] * n + c] != fuse[a * n + fuse[b * n + c]] {
                        report.push("monoid-associative", format!("· at ({},{},{})", e(a), e(b), e(c)));
                    }
                    let prod_le = meet[fuse[a * n + b] * n + c] == fuse[a * n + b];
                    let res_le = meet[a * n + imp[b * n + c]] == a;
                    if prod_le != res_le {
                        report.push(
                            "residuation",
                            format!("{}·{} ≤ {} and {} ≤ {}→{} disagree", e(a), e(b), e(c), e(a), e(b), e(c)),
                        );
                    }
                }
            }
        }
        report
    }
}
