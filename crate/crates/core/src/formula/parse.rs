//! Recursive-descent parser for formulas, formula multisets and claims.
//!
//! Grammar, loosest binding first (`->` right-associative, the rest
//! left-associative):
//!
//! ```text
//! formula    := or ( "->" formula )?
//! or         := and ( "|" and )*
//! and        := fus ( "&" fus )*
//! fus        := atom ( "*" atom )*
//! atom       := "1" | variable | "(" formula ")"
//! variable   := [a-z][a-zA-Z0-9_]*
//! multiset   := "[" ( formula ( "," formula )* )? "]"
//! claim      := multiset "|>" multiset
//! ```
//!
//! `⊗` is accepted as a synonym for `*`.

use super::{Consecution, Formula};
use crate::multiset::Multiset;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    OneLit,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Star,
    Amp,
    Pipe,
    Arrow,
    Turnstile,
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut toks = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < s.len() {
        let c = s[i..].chars().next().unwrap();
        match c {
            ' ' | '\t' | '\n' | '\r' => i += c.len_utf8(),
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            '[' => {
                toks.push((i, Tok::LBracket));
                i += 1;
            }
            ']' => {
                toks.push((i, Tok::RBracket));
                i += 1;
            }
            ',' => {
                toks.push((i, Tok::Comma));
                i += 1;
            }
            '*' | '⊗' => {
                toks.push((i, Tok::Star));
                i += c.len_utf8();
            }
            '&' => {
                toks.push((i, Tok::Amp));
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((i, Tok::Arrow));
                    i += 2;
                } else {
                    return err(i, "expected '->'");
                }
            }
            '|' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((i, Tok::Turnstile));
                    i += 2;
                } else {
                    toks.push((i, Tok::Pipe));
                    i += 1;
                }
            }
            '1' => {
                toks.push((i, Tok::OneLit));
                i += 1;
            }
            'a'..='z' => {
                let start = i;
                i += 1;
                while i < s.len() {
                    let d = bytes[i];
                    if d.is_ascii_alphanumeric() || d == b'_' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                toks.push((start, Tok::Ident(s[start..i].to_string())));
            }
            _ => return err(i, format!("unexpected character {c:?}")),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|(_, t)| t.clone());
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(want) {
            self.i += 1;
            Ok(())
        } else {
            err(self.pos(), format!("expected {what}"))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or_level()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.i += 1;
            let rhs = self.formula()?;
            Ok(Formula::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or_level(&mut self) -> Result<Formula, ParseError> {
        let mut t = self.and_level()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.i += 1;
            t = Formula::join(t, self.and_level()?);
        }
        Ok(t)
    }

    fn and_level(&mut self) -> Result<Formula, ParseError> {
        let mut t = self.fus_level()?;
        while self.peek() == Some(&Tok::Amp) {
            self.i += 1;
            t = Formula::meet(t, self.fus_level()?);
        }
        Ok(t)
    }

    fn fus_level(&mut self) -> Result<Formula, ParseError> {
        let mut t = self.atom()?;
        while self.peek() == Some(&Tok::Star) {
            self.i += 1;
            t = Formula::fusion(t, self.atom()?);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let p = self.pos();
        match self.bump() {
            Some(Tok::OneLit) => Ok(Formula::One),
            Some(Tok::Ident(v)) => Ok(Formula::Var(v)),
            Some(Tok::LParen) => {
                let t = self.formula()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(t)
            }
            _ => err(p, "expected a formula"),
        }
    }

    fn multiset(&mut self) -> Result<Multiset<Formula>, ParseError> {
        self.expect(&Tok::LBracket, "'['")?;
        let mut m = Multiset::new();
        if self.peek() == Some(&Tok::RBracket) {
            self.i += 1;
            return Ok(m);
        }
        loop {
            m.insert(self.formula()?);
            match self.bump() {
                Some(Tok::Comma) => {}
                Some(Tok::RBracket) => return Ok(m),
                _ => return err(self.pos(), "expected ',' or ']'"),
            }
        }
    }

    fn finish<T>(mut self, v: T) -> Result<T, ParseError> {
        match self.bump() {
            None => Ok(v),
            Some(_) => err(self.toks[self.i - 1].0, "trailing input"),
        }
    }
}

fn parser(s: &str) -> Result<Parser, ParseError> {
    Ok(Parser { toks: lex(s)?, i: 0, end: s.len() })
}

pub fn parse_formula(s: &str) -> Result<Formula, ParseError> {
    let mut p = parser(s)?;
    let t = p.formula()?;
    p.finish(t)
}

pub fn parse_formula_multiset(s: &str) -> Result<Multiset<Formula>, ParseError> {
    let mut p = parser(s)?;
    let m = p.multiset()?;
    p.finish(m)
}

pub fn parse_consecution(s: &str) -> Result<Consecution, ParseError> {
    let mut p = parser(s)?;
    let premises = p.multiset()?;
    p.expect(&Tok::Turnstile, "'|>'")?;
    let conclusions = p.multiset()?;
    p.finish(Consecution { premises, conclusions })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn precedence_orders_the_connectives() {
        // * binds tighter than &, & tighter than |, | tighter than ->
        assert_eq!(f("p*q & r | s -> t"), f("(((p*q) & r) | s) -> t"));
    }

    #[test]
    fn associativity() {
        assert_eq!(f("p -> q -> r"), f("p -> (q -> r)"));
        assert_eq!(f("p & q & r"), f("(p & q) & r"));
        assert_eq!(f("p | q | r"), f("(p | q) | r"));
        assert_eq!(f("p * q * r"), f("(p * q) * r"));
    }

    #[test]
    fn unit_and_variables() {
        assert_eq!(f("1"), Formula::One);
        assert_eq!(f("abc_1X"), Formula::var("abc_1X"));
        assert!(parse_formula("Abc").is_err());
        assert!(parse_formula("2").is_err());
    }

    #[test]
    fn fusion_synonym_token() {
        assert_eq!(f("p ⊗ q"), f("p * q"));
    }

    #[test]
    fn multiset_literals() {
        let m = parse_formula_multiset("[p, q, p]").unwrap();
        assert_eq!(m.count(&Formula::var("p")), 2u8.into());
        assert_eq!(m.count(&Formula::var("q")), 1u8.into());
        assert!(parse_formula_multiset("[]").unwrap().is_empty());
        assert!(parse_formula_multiset("[p q]").is_err());
    }

    #[test]
    fn claims() {
        let c = parse_consecution("[p, p->q] |> [q]").unwrap();
        assert_eq!(c.premises.size(), 2u8.into());
        assert_eq!(c.conclusions, Multiset::singleton(Formula::var("q")));
        assert!(parse_consecution("[p] | [q]").is_err());
    }

    #[test]
    fn display_roundtrip_uses_minimal_parens() {
        for s in [
            "p",
            "1",
            "p*q & r | s -> t",
            "(p -> q) -> r",
            "p -> q -> r",
            "p*(q | r)",
            "(p & q)*r",
            "p & (q & r)",
        ] {
            let t = f(s);
            let printed = t.to_string();
            assert_eq!(f(&printed), t, "roundtrip failed for {s} -> {printed}");
        }
        assert_eq!(f("(p->q)->r").to_string(), "(p -> q) -> r");
        assert_eq!(f("p->(q->r)").to_string(), "p -> q -> r");
        assert_eq!(f("(p*q)*r").to_string(), "p*q*r");
        assert_eq!(f("p*(q*r)").to_string(), "p*(q*r)");
    }

    #[test]
    fn error_positions_point_at_the_problem() {
        let e = parse_formula("p -> ").unwrap_err();
        assert_eq!(e.pos, 5);
        let e = parse_formula("p @ q").unwrap_err();
        assert_eq!(e.pos, 2);
    }
}
