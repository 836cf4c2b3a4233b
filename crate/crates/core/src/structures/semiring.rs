//! Finite ordered semirings: a commutative additive pomonoid with least
//! unit, a (not necessarily commutative) multiplicative monoid, zero
//! annihilating, multiplication distributing over addition and monotone in
//! both arguments.  These are the scalars that act on modules.

use super::ValidationReport;
use super::pomonoid::FinitePomonoid;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoSemiring {
    pub name: String,
    pub elems: Vec<String>,
    pub leq: Vec<bool>,
    pub add: Vec<usize>,
    pub zero: usize,
    pub mul: Vec<usize>,
    pub one: usize,
}

impl FinitePoSemiring {
    pub fn n(&self) -> usize {
        self.elems.len()
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n() + b]
    }

    pub fn plus(&self, a: usize, b: usize) -> usize {
        self.add[a * self.n() + b]
    }

    pub fn times(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n() + b]
    }

    pub fn elem_name(&self, a: usize) -> &str {
        &self.elems[a]
    }

    /// The additive structure alone.
    pub fn additive_pomonoid(&self) -> FinitePomonoid {
        FinitePomonoid {
            name: format!("{}+", self.name),
            elems: self.elems.clone(),
            leq: self.leq.clone(),
            add: self.add.clone(),
            zero: self.zero,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.n();
        let mut r = self.additive_pomonoid().validate();
        if !r.violations.is_empty() {
            // Table shape errors from the reduct make the rest unreliable.
            if self.mul.len() != n * n {
                return r;
            }
        }
        if self.mul.len() != n * n || self.one >= n || self.mul.iter().any(|&v| v >= n) {
            r.push("tables", "multiplication table malformed".to_string());
            return r;
        }
        let name = |a: usize| self.elem_name(a);
        for a in 0..n {
            if self.times(self.one, a) != a || self.times(a, self.one) != a {
                r.push("mul-unit", format!("1·{} or {}·1", name(a), name(a)));
            }
            if self.times(self.zero, a) != self.zero || self.times(a, self.zero) != self.zero {
                r.push("mul-annihilation", format!("0·{} or {}·0", name(a), name(a)));
            }
            for b in 0..n {
                for c in 0..n {
                    if self.times(self.times(a, b), c) != self.times(a, self.times(b, c)) {
                        r.push("mul-associative", format!("({}·{})·{}", name(a), name(b), name(c)));
                    }
                    if self.times(a, self.plus(b, c)) != self.plus(self.times(a, b), self.times(a, c)) {
                        r.push("mul-distributes-left", format!("{}·({}+{})", name(a), name(b), name(c)));
                    }
                    if self.times(self.plus(a, b), c) != self.plus(self.times(a, c), self.times(b, c)) {
                        r.push("mul-distributes-right", format!("({}+{})·{}", name(a), name(b), name(c)));
                    }
                }
                if self.le(a, b) {
                    for e in 0..n {
                        if !self.le(self.times(a, e), self.times(b, e))
                            || !self.le(self.times(e, a), self.times(e, b))
                        {
                            r.push(
                                "mul-monotone",
                                format!("{} ≤ {} but products with {} disagree", name(a), name(b), name(e)),
                            );
                        }
                    }
                }
            }
        }
        r
    }

    /// Two scalars `0 < 1` with addition = maximum: `1` acts as identity,
    /// `0` absorbs.  The smallest non-trivial scalar structure.
    pub fn two() -> Self {
        FinitePoSemiring {
            name: "S2".into(),
            elems: vec!["0".into(), "1".into()],
            leq: vec![true, true, false, true],
            add: vec![0, 1, 1, 1],
            zero: 0,
            mul: vec![0, 0, 0, 1],
            one: 1,
        }
    }

    /// The chain `0 < 1 < k` with addition = maximum and multiplication
    /// `a·b = max(a,b)` except that `0` absorbs.  The extra scalar `k` is
    /// idempotent but not the unit, which is enough to break
    /// action-invariance of some operators on the regular module.
    pub fn three() -> Self {
        FinitePoSemiring {
            name: "S3".into(),
            elems: vec!["0".into(), "1".into(), "k".into()],
            leq: vec![true, true, true, false, true, true, false, false, true],
            add: vec![0, 1, 2, 1, 1, 2, 2, 2, 2],
            zero: 0,
            mul: vec![0, 0, 0, 0, 1, 2, 0, 2, 2],
            one: 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_element_scalars_validate() {
        let s = FinitePoSemiring::two();
        assert!(s.validate().is_ok(), "{}", s.validate());
    }

    #[test]
    fn three_element_scalars_validate() {
        let s = FinitePoSemiring::three();
        assert!(s.validate().is_ok(), "{}", s.validate());
    }

    #[test]
    fn broken_distributivity_is_reported() {
        let mut s = FinitePoSemiring::two();
        s.mul = vec![0, 1, 1, 1]; // 0·1 = 1 breaks annihilation
        let r = s.validate();
        assert!(r.violations.iter().any(|v| v.law == "mul-annihilation"));
    }
}
