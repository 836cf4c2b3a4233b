//! Linear derivations carrying their own certificates.
//!
//! A derivation is a sequence of formula multisets. Every step after the
//! first is justified by a schema name, a substitution, and the instantiated
//! premise multiset Ψ it consumed, so checking is a linear replay that never
//! searches. The replay accepts axiom steps as the Ψ = ∅ case.

use std::fmt;

use thiserror::Error;

use crate::formula::{Consecution, Formula, ParseError, Substitution, parse_consecution, parse_formula, parse_formula_multiset};
use crate::multiset::Multiset;
use crate::proof::system::AxiomaticSystem;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepJust {
    /// Schema name in the system.
    pub rule: String,
    pub subst: Substitution,
    /// The instantiated premises Ψ removed from the previous multiset.
    pub at: Multiset<Formula>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Derivation {
    pub steps: Vec<Multiset<Formula>>,
    /// One justification per step after the first.
    pub justs: Vec<StepJust>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    /// `step` is 1-based; step 0 points at the claim itself.
    Rejected { step: usize, reason: String },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }

    fn reject(step: usize, reason: impl Into<String>) -> Verdict {
        Verdict::Rejected { step, reason: reason.into() }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accepted => write!(f, "accepted"),
            Verdict::Rejected { step, reason } => write!(f, "rejected at step {step}: {reason}"),
        }
    }
}

/// Replays a derivation against its claim.
pub fn check_derivation(sys: &AxiomaticSystem, d: &Derivation, claim: &Consecution) -> Verdict {
    let Some(first) = d.steps.first() else {
        return Verdict::reject(0, "a derivation needs at least one step");
    };
    if *first != claim.premises {
        return Verdict::reject(1, "the first multiset must be the claimed premises");
    }
    if d.justs.len() + 1 != d.steps.len() {
        return Verdict::reject(
            0,
            format!("{} steps need {} justifications, found {}", d.steps.len(), d.steps.len() - 1, d.justs.len()),
        );
    }
    for (j, just) in d.justs.iter().enumerate() {
        let step = j + 2;
        let Some(schema) = sys.schema(&just.rule) else {
            return Verdict::reject(step, format!("unknown schema `{}`", just.rule));
        };
        if just.at != just.subst.apply_multiset(&schema.premises) {
            return Verdict::reject(step, "Ψ is not the substitution instance of the schema premises");
        }
        if !just.at.subset_of(&d.steps[j]) {
            return Verdict::reject(step, "Ψ does not embed in the previous multiset");
        }
        let expect = d.steps[j].difference(&just.at).sum(&just.subst.apply_multiset(&schema.conclusions));
        if d.steps[j + 1] != expect {
            return Verdict::reject(step, format!("the step should read {expect}"));
        }
    }
    if !claim.conclusions.subset_of(d.steps.last().unwrap()) {
        return Verdict::reject(d.steps.len(), "the claimed conclusions do not embed in the final multiset");
    }
    Verdict::Accepted
}

/// The same derivation carried out with `ctx` joined to every step.
pub fn with_context(d: &Derivation, ctx: &Multiset<Formula>) -> Derivation {
    Derivation { steps: d.steps.iter().map(|s| s.sum(ctx)).collect(), justs: d.justs.clone() }
}

/// The derivation with `sigma` applied to every step and justification.
pub fn apply_subst(d: &Derivation, sigma: &Substitution) -> Derivation {
    Derivation {
        steps: d.steps.iter().map(|s| sigma.apply_multiset(s)).collect(),
        justs: d
            .justs
            .iter()
            .map(|j| StepJust {
                rule: j.rule.clone(),
                subst: sigma.compose(&j.subst),
                at: sigma.apply_multiset(&j.at),
            })
            .collect(),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot concatenate: the first derivation ends at {end} but the second starts at {start}")]
pub struct ConcatMismatch {
    pub end: String,
    pub start: String,
}

/// Joins two derivations end to start.
pub fn concat(d1: &Derivation, d2: &Derivation) -> Result<Derivation, ConcatMismatch> {
    match (d1.steps.last(), d2.steps.first()) {
        (Some(end), Some(start)) if end != start => {
            Err(ConcatMismatch { end: end.to_string(), start: start.to_string() })
        }
        _ => {
            let mut steps = d1.steps.clone();
            steps.extend(d2.steps.iter().skip(if d1.steps.is_empty() { 0 } else { 1 }).cloned());
            let mut justs = d1.justs.clone();
            justs.extend(d2.justs.iter().cloned());
            Ok(Derivation { steps, justs })
        }
    }
}

fn format_subst(s: &Substitution) -> String {
    let body: Vec<String> = s.exceptions().map(|(v, t)| format!("{v}={t}")).collect();
    format!("{{{}}}", body.join(", "))
}

/// Writes a derivation as a replayable certificate:
/// a `claim:` header, one `step:` line per multiset, and a
/// `by: <rule> subst: {..} at: [Ψ]` line after every justified step.
pub fn format_certificate(d: &Derivation, claim: &Consecution) -> String {
    let mut out = format!("claim: {claim}\n");
    for (i, step) in d.steps.iter().enumerate() {
        out.push_str(&format!("step: {step}\n"));
        if i > 0 {
            let j = &d.justs[i - 1];
            out.push_str(&format!("by: {} subst: {} at: {}\n", j.rule, format_subst(&j.subst), j.at));
        }
    }
    out
}

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("line {line}: expected `claim:`, `step:` or `by:`")]
    BadLine { line: usize },
    #[error("line {line}: {err}")]
    BadSyntax { line: usize, err: ParseError },
    #[error("line {line}: malformed `by:` line")]
    BadJustification { line: usize },
    #[error("the certificate must start with a `claim:` line")]
    MissingClaim,
    #[error("line {line}: `by:` must follow a step")]
    DanglingJustification { line: usize },
}

/// Parses the certificate format written by [`format_certificate`].
pub fn parse_certificate(src: &str) -> Result<(Derivation, Consecution), CertificateError> {
    let mut claim: Option<Consecution> = None;
    let mut d = Derivation::default();
    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        if let Some(rest) = text.strip_prefix("claim:") {
            claim = Some(parse_consecution(rest.trim()).map_err(|err| CertificateError::BadSyntax { line, err })?);
        } else if let Some(rest) = text.strip_prefix("step:") {
            d.steps.push(parse_formula_multiset(rest.trim()).map_err(|err| CertificateError::BadSyntax { line, err })?);
        } else if let Some(rest) = text.strip_prefix("by:") {
            if d.steps.len() != d.justs.len() + 2 {
                return Err(CertificateError::DanglingJustification { line });
            }
            let rest = rest.trim();
            let (rule, rest) = rest
                .split_once(" subst:")
                .ok_or(CertificateError::BadJustification { line })?;
            let (subst_text, at_text) = rest
                .split_once("at:")
                .ok_or(CertificateError::BadJustification { line })?;
            let subst_text = subst_text.trim();
            let inner = subst_text
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or(CertificateError::BadJustification { line })?;
            let mut subst = Substitution::identity();
            for pair in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                let (v, t) = pair.split_once('=').ok_or(CertificateError::BadJustification { line })?;
                let t = parse_formula(t.trim()).map_err(|err| CertificateError::BadSyntax { line, err })?;
                subst.set(v.trim().to_string(), t);
            }
            let at = parse_formula_multiset(at_text.trim())
                .map_err(|err| CertificateError::BadSyntax { line, err })?;
            d.justs.push(StepJust { rule: rule.trim().to_string(), subst, at });
        } else {
            return Err(CertificateError::BadLine { line });
        }
    }
    let claim = claim.ok_or(CertificateError::MissingClaim)?;
    Ok((d, claim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula_multiset as pm;
    use crate::proof::system::load_system;

    fn mp_system() -> AxiomaticSystem {
        load_system("axiom K: [] |> [p->(q->p)]\nrule MP: [p, p->q] |> [q]\n").unwrap()
    }

    fn mp_step() -> Derivation {
        Derivation {
            steps: vec![pm("[a, a->b]").unwrap(), pm("[b]").unwrap()],
            justs: vec![StepJust {
                rule: "MP".to_string(),
                subst: Substitution::from_pairs([
                    ("p".to_string(), parse_formula("a").unwrap()),
                    ("q".to_string(), parse_formula("b").unwrap()),
                ]),
                at: pm("[a, a->b]").unwrap(),
            }],
        }
    }

    #[test]
    fn detachment_replays() {
        let claim = parse_consecution("[a, a->b] |> [b]").unwrap();
        assert!(check_derivation(&mp_system(), &mp_step(), &claim).is_accepted());
    }

    #[test]
    fn a_single_step_covers_reflexivity() {
        let sys = AxiomaticSystem::empty();
        let d = Derivation { steps: vec![pm("[a, b]").unwrap()], justs: vec![] };
        let claim = parse_consecution("[a, b] |> [a]").unwrap();
        assert!(check_derivation(&sys, &d, &claim).is_accepted());
        let too_much = parse_consecution("[a, b] |> [a, a]").unwrap();
        assert!(!check_derivation(&sys, &d, &too_much).is_accepted());
    }

    #[test]
    fn axiom_steps_insert_into_any_context() {
        let sys = mp_system();
        let subst = Substitution::from_pairs([
            ("p".to_string(), parse_formula("a").unwrap()),
            ("q".to_string(), parse_formula("a").unwrap()),
        ]);
        let d = Derivation {
            steps: vec![pm("[c]").unwrap(), pm("[c, a->(a->a)]").unwrap()],
            justs: vec![StepJust { rule: "K".to_string(), subst, at: Multiset::new() }],
        };
        let claim = parse_consecution("[c] |> [a->(a->a)]").unwrap();
        assert!(check_derivation(&sys, &d, &claim).is_accepted());
    }

    #[test]
    fn rejection_pinpoints_the_first_bad_step() {
        let sys = mp_system();
        let claim = parse_consecution("[a, a->b] |> [b]").unwrap();

        let mut wrong_start = mp_step();
        wrong_start.steps[0] = pm("[a]").unwrap();
        assert_eq!(
            check_derivation(&sys, &wrong_start, &claim),
            Verdict::Rejected { step: 1, reason: "the first multiset must be the claimed premises".into() }
        );

        let mut wrong_psi = mp_step();
        wrong_psi.justs[0].at = pm("[a]").unwrap();
        let Verdict::Rejected { step: 2, .. } = check_derivation(&sys, &wrong_psi, &claim) else {
            panic!("expected rejection at step 2");
        };

        let mut wrong_result = mp_step();
        wrong_result.steps[1] = pm("[a]").unwrap();
        let Verdict::Rejected { step: 2, .. } = check_derivation(&sys, &wrong_result, &claim) else {
            panic!("expected rejection at step 2");
        };

        let mut unknown = mp_step();
        unknown.justs[0].rule = "XX".to_string();
        let Verdict::Rejected { step: 2, .. } = check_derivation(&sys, &unknown, &claim) else {
            panic!("expected rejection at step 2");
        };
    }

    #[test]
    fn transforms_preserve_acceptance() {
        let sys = mp_system();
        let d = mp_step();

        let ctx = pm("[z, z]").unwrap();
        let wide = with_context(&d, &ctx);
        let claim = parse_consecution("[a, a->b, z, z] |> [b, z]").unwrap();
        assert!(check_derivation(&sys, &wide, &claim).is_accepted());

        let sigma = Substitution::from_pairs([("a".to_string(), parse_formula("x&y").unwrap())]);
        let subbed = apply_subst(&d, &sigma);
        let claim = parse_consecution("[x&y, (x&y)->b] |> [b]").unwrap();
        assert!(check_derivation(&sys, &subbed, &claim).is_accepted());

        let d2 = Derivation { steps: vec![pm("[b]").unwrap()], justs: vec![] };
        let glued = concat(&d, &d2).unwrap();
        assert_eq!(glued.steps.len(), 2);
        let bad = Derivation { steps: vec![pm("[c]").unwrap()], justs: vec![] };
        assert!(concat(&d, &bad).is_err());
    }

    #[test]
    fn certificates_round_trip() {
        let claim = parse_consecution("[a, a->b] |> [b]").unwrap();
        let text = format_certificate(&mp_step(), &claim);
        let (d, c) = parse_certificate(&text).unwrap();
        assert_eq!(d, mp_step());
        assert_eq!(c, claim);
        assert!(check_derivation(&mp_system(), &d, &c).is_accepted());

        assert!(matches!(parse_certificate("step: [a]"), Err(CertificateError::MissingClaim)));
        assert!(matches!(
            parse_certificate("claim: [] |> [a]\nby: MP subst: {} at: []"),
            Err(CertificateError::DanglingJustification { .. })
        ));
    }
}
