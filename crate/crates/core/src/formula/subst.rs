//! Substitutions and the monoid of substitution multisets.
//!
//! A substitution maps variables to formulas.  Most substitutions of
//! interest move finitely many variables, but the distinguished witness for
//! the projectivity check sends *every* variable to a single formula, so a
//! substitution here is a finite exception map over a base that is either
//! the identity or a constant map.  Multisets of substitutions form a
//! monoid under the all-pairs composition product; they act on formula
//! multisets by applying each member and summing the results.

use super::Formula;
use crate::multiset::Multiset;
use std::collections::BTreeMap;
use std::fmt;

/// Image of the variables outside the explicit exception map.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Outside {
    Identity,
    Const(Formula),
}

/// A total map from variables to formulas in canonical form: no exception
/// entry repeats what the base already says, so derived equality is equality
/// of the underlying functions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Substitution {
    outside: Outside,
    map: BTreeMap<String, Formula>,
}

impl Substitution {
    pub fn identity() -> Self {
        Substitution { outside: Outside::Identity, map: BTreeMap::new() }
    }

    /// The substitution sending every variable to `t`.
    pub fn constant(t: Formula) -> Self {
        Substitution { outside: Outside::Const(t), map: BTreeMap::new() }
    }

    /// Identity outside the listed exceptions.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, Formula)>) -> Self {
        let mut s = Self::identity();
        for (v, t) in pairs {
            s.set(v, t);
        }
        s
    }

    /// Redefines the image of one variable, keeping the canonical form.
    pub fn set(&mut self, v: String, t: Formula) {
        let redundant = match &self.outside {
            Outside::Identity => t == Formula::Var(v.clone()),
            Outside::Const(u) => t == *u,
        };
        if redundant {
            self.map.remove(&v);
        } else {
            self.map.insert(v, t);
        }
    }

    pub fn is_identity(&self) -> bool {
        self.outside == Outside::Identity && self.map.is_empty()
    }

    /// The exception entries, in variable order.
    pub fn exceptions(&self) -> impl Iterator<Item = (&String, &Formula)> {
        self.map.iter()
    }

    pub fn outside(&self) -> &Outside {
        &self.outside
    }

    /// Image of a single variable.
    pub fn image_of(&self, v: &str) -> Formula {
        match self.map.get(v) {
            Some(t) => t.clone(),
            None => match &self.outside {
                Outside::Identity => Formula::var(v),
                Outside::Const(t) => t.clone(),
            },
        }
    }

    /// Applies the substitution to a formula.
    pub fn apply(&self, t: &Formula) -> Formula {
        match t {
            Formula::Var(v) => self.image_of(v),
            Formula::One => Formula::One,
            Formula::Meet(a, b) => Formula::meet(self.apply(a), self.apply(b)),
            Formula::Join(a, b) => Formula::join(self.apply(a), self.apply(b)),
            Formula::Fusion(a, b) => Formula::fusion(self.apply(a), self.apply(b)),
            Formula::Imp(a, b) => Formula::imp(self.apply(a), self.apply(b)),
        }
    }

    /// Applies the substitution to every occurrence; collisions accumulate.
    pub fn apply_multiset(&self, m: &Multiset<Formula>) -> Multiset<Formula> {
        m.map(|t| self.apply(t))
    }

    /// Composition `self ∘ inner`: apply `inner` first, then `self`.
    pub fn compose(&self, inner: &Substitution) -> Substitution {
        let outside = match &inner.outside {
            Outside::Identity => self.outside.clone(),
            Outside::Const(t) => Outside::Const(self.apply(t)),
        };
        let mut out = Substitution { outside, map: BTreeMap::new() };
        for (v, t) in &inner.map {
            out.set(v.clone(), self.apply(t));
        }
        if inner.outside == Outside::Identity {
            for (v, t) in &self.map {
                if !inner.map.contains_key(v) {
                    out.set(v.clone(), t.clone());
                }
            }
        }
        out
    }
}

/// `{p=q->r, q=1}`; a constant base shows up as a leading `*=t` entry.
impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        if let Outside::Const(t) = &self.outside {
            write!(f, "*={t}")?;
            first = false;
        }
        for (v, t) in &self.map {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{v}={t}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

/// The unit of the substitution-multiset monoid: one copy of the identity.
pub fn sigma_unit() -> Multiset<Substitution> {
    Multiset::singleton(Substitution::identity())
}

/// All-pairs composition: every member of `x` composed with every member of
/// `y`, multiplicities multiplying.
pub fn subst_product(
    x: &Multiset<Substitution>,
    y: &Multiset<Substitution>,
) -> Multiset<Substitution> {
    let mut out = Multiset::new();
    for (s, n) in x.iter() {
        for (t, m) in y.iter() {
            out.insert_many(s.compose(t), n * m);
        }
    }
    out
}

/// Action of a substitution multiset on a formula multiset: apply each
/// member to the whole multiset and sum the results.
pub fn sigma_action(x: &Multiset<Substitution>, gamma: &Multiset<Formula>) -> Multiset<Formula> {
    let mut out = Multiset::new();
    for (s, n) in x.iter() {
        out = out.sum(&s.apply_multiset(gamma).scaled(n));
    }
    out
}

/// The cyclic-projectivity witness: the formula multiset `[x]` together with
/// the one-element substitution multiset collapsing every variable to `x`.
pub fn projectivity_witness() -> (Multiset<Substitution>, Multiset<Formula>) {
    let mu = Multiset::singleton(Substitution::constant(Formula::var("x")));
    let v = Multiset::singleton(Formula::var("x"));
    (mu, v)
}

#[cfg(test)]
mod tests {
    use super::super::parse_formula;
    use super::*;

    fn sub(pairs: &[(&str, &str)]) -> Substitution {
        Substitution::from_pairs(
            pairs.iter().map(|(v, t)| (v.to_string(), parse_formula(t).unwrap())),
        )
    }

    #[test]
    fn identity_and_canonical_form() {
        let mut s = sub(&[("p", "p"), ("q", "q")]);
        assert!(s.is_identity());
        s.set("p".into(), parse_formula("q").unwrap());
        assert!(!s.is_identity());
        s.set("p".into(), parse_formula("p").unwrap());
        assert!(s.is_identity());
        let mut c = Substitution::constant(Formula::One);
        c.set("p".into(), Formula::One);
        assert_eq!(c, Substitution::constant(Formula::One));
    }

    #[test]
    fn application_is_structural() {
        let s = sub(&[("p", "q -> r"), ("q", "1")]);
        let t = parse_formula("p * q & p").unwrap();
        assert_eq!(s.apply(&t), parse_formula("(q -> r) * 1 & (q -> r)").unwrap());
    }

    #[test]
    fn composition_agrees_with_sequential_application() {
        let s = sub(&[("p", "q"), ("r", "p * p")]);
        let t = sub(&[("q", "r -> 1"), ("p", "r")]);
        let c = s.compose(&t);
        for v in ["p", "q", "r", "z"] {
            assert_eq!(c.image_of(v), s.apply(&t.image_of(v)), "at {v}");
        }
        let u = Substitution::constant(parse_formula("p & q").unwrap());
        let cu = s.compose(&u);
        assert_eq!(cu, Substitution::constant(parse_formula("q & q").unwrap()));
        let uc = u.compose(&s);
        let mut expect = Substitution::constant(parse_formula("p & q").unwrap());
        expect.set("r".into(), parse_formula("(p & q) * (p & q)").unwrap());
        assert_eq!(uc, expect);
    }

    #[test]
    fn product_unit_and_multiplicities() {
        let x: Multiset<Substitution> =
            [sub(&[("p", "q")]), sub(&[("p", "q")]), sub(&[("q", "1")])].into_iter().collect();
        assert_eq!(subst_product(&sigma_unit(), &x), x);
        assert_eq!(subst_product(&x, &sigma_unit()), x);
        let y: Multiset<Substitution> = [sub(&[("r", "p")])].into_iter().collect();
        let prod = subst_product(&x, &y);
        assert_eq!(prod.size(), 3u8.into());
    }

    #[test]
    fn action_distributes_and_counts() {
        let gamma = crate::formula::parse_formula_multiset("[p, p, q]").unwrap();
        let x: Multiset<Substitution> =
            [sub(&[("p", "q")]), sub(&[("p", "q")])].into_iter().collect();
        let acted = sigma_action(&x, &gamma);
        assert_eq!(acted, crate::formula::parse_formula_multiset("[q,q,q,q,q,q]").unwrap());
        assert_eq!(sigma_action(&sigma_unit(), &gamma), gamma);
        assert_eq!(sigma_action(&x, &Multiset::new()), Multiset::new());
    }

    #[test]
    fn action_is_associative_with_product() {
        let x: Multiset<Substitution> = [sub(&[("p", "q -> r")])].into_iter().collect();
        let y: Multiset<Substitution> =
            [sub(&[("q", "p")]), sub(&[("r", "1")])].into_iter().collect();
        let gamma = crate::formula::parse_formula_multiset("[p & q, r]").unwrap();
        assert_eq!(
            sigma_action(&subst_product(&x, &y), &gamma),
            sigma_action(&x, &sigma_action(&y, &gamma)),
        );
    }

    #[test]
    fn witness_fixes_its_generator() {
        let (mu, v) = projectivity_witness();
        assert_eq!(sigma_action(&mu, &v), v);
    }

    #[test]
    fn display_shows_exceptions_and_base() {
        assert_eq!(sub(&[("p", "q -> r"), ("q", "1")]).to_string(), "{p=q -> r, q=1}");
        assert_eq!(Substitution::constant(Formula::var("x")).to_string(), "{*=x}");
        assert_eq!(Substitution::identity().to_string(), "{}");
    }
}
