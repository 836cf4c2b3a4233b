//! Finite ordered commutative monoids with least unit.
//!
//! The validator checks, with witnesses: partial order, commutative monoid,
//! translation-monotonicity of the operation, and the unit being the least
//! element.  Multisets under sum are the motivating example; the finite
//! carriers here are what the exhaustive machinery in [`crate::structures`]
//! actually runs on.

use super::{StructuresError, ValidationReport, guard};

/// Carrier `0..n` with display names, order matrix, operation table and unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePomonoid {
    pub name: String,
    pub elems: Vec<String>,
    /// Row-major `n x n`: `leq[a*n+b]` holds when `a ≤ b`.
    pub leq: Vec<bool>,
    /// Row-major `n x n`: `add[a*n+b]` is `a + b`.
    pub add: Vec<usize>,
    pub zero: usize,
}

impl FinitePomonoid {
    pub fn n(&self) -> usize {
        self.elems.len()
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n() + b]
    }

    pub fn plus(&self, a: usize, b: usize) -> usize {
        self.add[a * self.n() + b]
    }

    pub fn elem_name(&self, a: usize) -> &str {
        &self.elems[a]
    }

    /// Validates the structure, reporting every broken law.
    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new();
        let n = self.n();
        if self.leq.len() != n * n || self.add.len() != n * n {
            r.push("tables", format!("expected {} entries, got {}/{}", n * n, self.leq.len(), self.add.len()));
            return r;
        }
        if self.zero >= n {
            r.push("unit", format!("unit index {} out of range", self.zero));
            return r;
        }
        if let Some(bad) = self.add.iter().find(|&&v| v >= n) {
            r.push("tables", format!("operation entry {bad} out of range"));
            return r;
        }
        let name = |a: usize| self.elem_name(a);
        for a in 0..n {
            if !self.le(a, a) {
                r.push("order-reflexive", format!("{} ≤ {} fails", name(a), name(a)));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && self.le(a, b) && self.le(b, a) {
                    r.push("order-antisymmetric", format!("{} and {}", name(a), name(b)));
                }
                for c in 0..n {
                    if self.le(a, b) && self.le(b, c) && !self.le(a, c) {
                        r.push(
                            "order-transitive",
                            format!("{} ≤ {} ≤ {} but not {} ≤ {}", name(a), name(b), name(c), name(a), name(c)),
                        );
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.plus(a, b) != self.plus(b, a) {
                    r.push("op-commutative", format!("{}+{} ≠ {}+{}", name(a), name(b), name(b), name(a)));
                }
                for c in 0..n {
                    if self.plus(self.plus(a, b), c) != self.plus(a, self.plus(b, c)) {
                        r.push("op-associative", format!("({}+{})+{}", name(a), name(b), name(c)));
                    }
                }
            }
        }
        for a in 0..n {
            if self.plus(self.zero, a) != a {
                r.push("op-unit", format!("{}+{} ≠ {}", name(self.zero), name(a), name(a)));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.le(a, b) {
                    for c in 0..n {
                        if !self.le(self.plus(a, c), self.plus(b, c)) {
                            r.push(
                                "op-monotone",
                                format!("{} ≤ {} but {}+{} ≰ {}+{}", name(a), name(b), name(a), name(c), name(b), name(c)),
                            );
                        }
                    }
                }
            }
        }
        for a in 0..n {
            if !self.le(self.zero, a) {
                r.push("unit-least", format!("{} ≰ {}", name(self.zero), name(a)));
            }
        }
        r
    }

    /// One-element structure.
    pub fn trivial() -> Self {
        FinitePomonoid {
            name: "T1".into(),
            elems: vec!["0".into()],
            leq: vec![true],
            add: vec![0],
            zero: 0,
        }
    }

    /// The chain `0 < 1 < … < n-1` under maximum.
    pub fn chain_join(n: usize, name: &str) -> Self {
        Self::chain_with(n, name, |a, b| a.max(b))
    }

    /// The chain `0 < 1 < … < n-1` under addition truncated at the top.
    pub fn chain_truncated(n: usize, name: &str) -> Self {
        Self::chain_with(n, name, move |a, b| (a + b).min(n - 1))
    }

    fn chain_with(n: usize, name: &str, op: impl Fn(usize, usize) -> usize) -> Self {
        assert!(n >= 1);
        let mut leq = vec![false; n * n];
        let mut add = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = a <= b;
                add[a * n + b] = op(a, b);
            }
        }
        FinitePomonoid {
            name: name.into(),
            elems: (0..n).map(|i| i.to_string()).collect(),
            leq,
            add,
            zero: 0,
        }
    }

    /// Subsets of `base` under union and inclusion.  Element `i` is the
    /// subset whose bits are `i`; names are `{}`, `{a}`, `{a,b}`, …
    ///
    /// Exhaustive consumers keep this small, hence the guard at 4 atoms.
    pub fn powerset(base: &[&str]) -> Result<Self, StructuresError> {
        guard("powerset base", base.len(), 4)?;
        let n = 1usize << base.len();
        let set_name = |mask: usize| {
            let members: Vec<&str> =
                (0..base.len()).filter(|i| mask >> i & 1 == 1).map(|i| base[i]).collect();
            format!("{{{}}}", members.join(","))
        };
        let mut leq = vec![false; n * n];
        let mut add = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = a & !b == 0;
                add[a * n + b] = a | b;
            }
        }
        Ok(FinitePomonoid {
            name: format!("P{}", base.len()),
            elems: (0..n).map(set_name).collect(),
            leq,
            add,
            zero: 0,
        })
    }

    /// The shipped structures with at most three elements.  Every such
    /// structure is isomorphic to one of these four: a carrier of size at
    /// most 3 with a least unit must be a chain (the operation is an upper
    /// bound of its arguments, and a three-element non-chain with bottom has
    /// two maximal elements without an upper bound), and on the 3-chain the
    /// operation is forced to be either maximum or truncated addition.
    pub fn small_fixtures() -> Vec<FinitePomonoid> {
        vec![
            Self::trivial(),
            Self::chain_join(2, "C2"),
            Self::chain_join(3, "C3"),
            Self::chain_truncated(3, "N3"),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_validate() {
        for p in FinitePomonoid::small_fixtures() {
            assert!(p.validate().is_ok(), "{}: {}", p.name, p.validate());
        }
        let p = FinitePomonoid::powerset(&["a", "b"]).unwrap();
        assert!(p.validate().is_ok(), "{}", p.validate());
        assert_eq!(p.elems[3], "{a,b}");
        assert_eq!(p.plus(1, 2), 3);
        assert!(p.le(0, 3) && !p.le(1, 2));
    }

    #[test]
    fn truncated_chain_adds() {
        let p = FinitePomonoid::chain_truncated(3, "N3");
        assert_eq!(p.plus(1, 1), 2);
        assert_eq!(p.plus(1, 2), 2);
        assert_eq!(p.plus(0, 2), 2);
    }

    #[test]
    fn validator_reports_broken_laws() {
        // 1+1=0 breaks monotonicity (0 ≤ 1 gives 1 = 1+0 ≤ 1+1 = 0).
        let p = FinitePomonoid {
            name: "bad".into(),
            elems: vec!["0".into(), "1".into()],
            leq: vec![true, true, false, true],
            add: vec![0, 1, 1, 0],
            zero: 0,
        };
        let r = p.validate();
        assert!(r.violations.iter().any(|v| v.law == "op-monotone"));
        // A non-least unit.
        let q = FinitePomonoid {
            name: "bad2".into(),
            elems: vec!["0".into(), "1".into()],
            leq: vec![true, false, false, true],
            add: vec![0, 1, 1, 1],
            zero: 0,
        };
        let r = q.validate();
        assert!(r.violations.iter().any(|v| v.law == "unit-least"));
    }

    #[test]
    fn powerset_guard_refuses_large_bases() {
        assert!(FinitePomonoid::powerset(&["a", "b", "c", "d", "e"]).is_err());
    }
}
