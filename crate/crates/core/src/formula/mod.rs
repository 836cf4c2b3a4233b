//! The propositional language and its substitution monoid.
//!
//! Formulas are built from variables and the unit constant `1` with four
//! binary connectives: meet `&`, join `|`, fusion `*` and implication `->`.
//! Premises and conclusions are *multisets* of formulas; a claim pairs the
//! two as `[Γ] |> [Δ]`.

pub mod parse;
pub mod subst;

pub use parse::{ParseError, parse_consecution, parse_formula, parse_formula_multiset};
pub use subst::{Outside, Substitution, projectivity_witness, sigma_action, sigma_unit, subst_product};

use crate::multiset::Multiset;
use std::collections::BTreeSet;
use std::fmt;

/// A propositional formula.  The derived `Ord` is the structural order used
/// wherever formulas are stored in multisets or sorted for output.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    Var(String),
    One,
    Meet(Box<Formula>, Box<Formula>),
    Join(Box<Formula>, Box<Formula>),
    Fusion(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Self {
        Formula::Var(name.to_string())
    }

    pub fn meet(a: Formula, b: Formula) -> Self {
        Formula::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: Formula, b: Formula) -> Self {
        Formula::Join(Box::new(a), Box::new(b))
    }

    pub fn fusion(a: Formula, b: Formula) -> Self {
        Formula::Fusion(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    /// Collects the variables occurring in the formula into `out`.
    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::One => {}
            Formula::Meet(a, b)
            | Formula::Join(a, b)
            | Formula::Fusion(a, b)
            | Formula::Imp(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        self.collect_vars(&mut s);
        s
    }
}

// Printing uses minimal parentheses.  Binding strength, tightest first:
// `*`, `&`, `|`, `->`; implication associates to the right, the rest to the
// left.  `parse_formula` inverts this exactly.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn prec(t: &Formula) -> u8 {
            match t {
                Formula::Var(_) | Formula::One => 5,
                Formula::Fusion(..) => 4,
                Formula::Meet(..) => 3,
                Formula::Join(..) => 2,
                Formula::Imp(..) => 1,
            }
        }
        fn go(t: &Formula, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let p = prec(t);
            if p < min {
                write!(f, "(")?;
            }
            match t {
                Formula::Var(v) => write!(f, "{v}")?,
                Formula::One => write!(f, "1")?,
                Formula::Fusion(a, b) => {
                    go(a, p, f)?;
                    write!(f, "*")?;
                    go(b, p + 1, f)?;
                }
                Formula::Meet(a, b) => {
                    go(a, p, f)?;
                    write!(f, " & ")?;
                    go(b, p + 1, f)?;
                }
                Formula::Join(a, b) => {
                    go(a, p, f)?;
                    write!(f, " | ")?;
                    go(b, p + 1, f)?;
                }
                Formula::Imp(a, b) => {
                    go(a, p + 1, f)?;
                    write!(f, " -> ")?;
                    go(b, p, f)?;
                }
            }
            if p < min {
                write!(f, ")")?;
            }
            Ok(())
        }
        go(self, 0, f)
    }
}

/// A claim `[Γ] |> [Δ]`: from the premise multiset `Γ` derive the conclusion
/// multiset `Δ`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Consecution {
    pub premises: Multiset<Formula>,
    pub conclusions: Multiset<Formula>,
}

impl Consecution {
    pub fn new(premises: Multiset<Formula>, conclusions: Multiset<Formula>) -> Self {
        Consecution { premises, conclusions }
    }

    /// Variables occurring on either side.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        for t in self.premises.support().chain(self.conclusions.support()) {
            t.collect_vars(&mut s);
        }
        s
    }
}

impl fmt::Display for Consecution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |> {}", self.premises, self.conclusions)
    }
}
