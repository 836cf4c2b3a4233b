//! Tree-shaped proofs for single-conclusion systems.
//!
//! Every node is labelled by a formula.  Leaves are tagged either `hyp`
//! (an occurrence drawn from the premises) or `axiom <name>` (an instance
//! of a premise-free schema); an inner node must be the conclusion of a
//! rule instance whose premises are exactly the children's labels.  Unlike
//! linear derivations the tree stores no substitutions: the checker
//! re-discovers the instance at every node, which is what makes the text
//! format light.

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::formula::{Consecution, Formula, ParseError, parse_formula};
use crate::multiset::Multiset;
use crate::proof::derivation::Verdict;
use crate::proof::matching::{match_consecution_exact, match_multiset_exact};
use crate::proof::system::AxiomaticSystem;
use crate::proof::ProofError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LeafTag {
    /// An instance of the named premise-free schema.
    Axiom(String),
    /// One occurrence taken from the premises.
    Hyp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeProof {
    pub label: Formula,
    pub children: Vec<TreeProof>,
    /// Only leaves carry a tag.
    pub tag: Option<LeafTag>,
}

impl TreeProof {
    pub fn hyp(label: Formula) -> Self {
        TreeProof { label, children: vec![], tag: Some(LeafTag::Hyp) }
    }

    pub fn axiom(rule: impl Into<String>, label: Formula) -> Self {
        TreeProof { label, children: vec![], tag: Some(LeafTag::Axiom(rule.into())) }
    }

    pub fn node(label: Formula, children: Vec<TreeProof>) -> Self {
        TreeProof { label, children, tag: None }
    }

    /// The multiset of `hyp`-leaf labels, counted with multiplicity.
    pub fn hypotheses(&self) -> Multiset<Formula> {
        let mut out = Multiset::new();
        self.collect_hyps(&mut out);
        out
    }

    fn collect_hyps(&self, out: &mut Multiset<Formula>) {
        if self.children.is_empty() {
            if matches!(self.tag, Some(LeafTag::Hyp)) {
                out.insert(self.label.clone());
            }
        } else {
            for c in &self.children {
                c.collect_hyps(out);
            }
        }
    }
}

pub(crate) fn require_single_conclusion(sys: &AxiomaticSystem) -> Result<(), ProofError> {
    if sys.single_conclusion {
        return Ok(());
    }
    let width = sys
        .schemata
        .iter()
        .map(|s| s.conclusions.size().to_usize().unwrap_or(usize::MAX))
        .find(|&w| w != 1)
        .unwrap_or(0);
    Err(ProofError::NotSingleConclusion(width))
}

/// Checks a tree proof of `conclusion` from `premises`.  Node numbers in
/// rejections count the preorder traversal from 1.
pub fn check_tree_proof(
    sys: &AxiomaticSystem,
    t: &TreeProof,
    premises: &Multiset<Formula>,
    conclusion: &Formula,
) -> Result<Verdict, ProofError> {
    require_single_conclusion(sys)?;
    if t.label != *conclusion {
        return Ok(Verdict::Rejected {
            step: 1,
            reason: format!("the root is {} but the claim concludes {}", t.label, conclusion),
        });
    }
    let mut counter = 0;
    if let Some(v) = check_node(sys, t, &mut counter) {
        return Ok(v);
    }
    if !t.hypotheses().subset_of(premises) {
        return Ok(Verdict::Rejected {
            step: 1,
            reason: format!("the hyp leaves use {} which exceeds the premises {}", t.hypotheses(), premises),
        });
    }
    Ok(Verdict::Accepted)
}

fn check_node(sys: &AxiomaticSystem, t: &TreeProof, counter: &mut usize) -> Option<Verdict> {
    *counter += 1;
    let here = *counter;
    let reject = |reason: String| Some(Verdict::Rejected { step: here, reason });
    if t.children.is_empty() {
        match &t.tag {
            None => reject("a leaf must be tagged hyp or axiom".to_string()),
            Some(LeafTag::Hyp) => None,
            Some(LeafTag::Axiom(name)) => {
                let Some(schema) = sys.schema(name) else {
                    return reject(format!("unknown schema `{name}`"));
                };
                if !schema.is_axiom() {
                    return reject(format!("`{name}` has premises and cannot tag a leaf"));
                }
                let target = Multiset::singleton(t.label.clone());
                if match_multiset_exact(&schema.conclusions, &target).is_empty() {
                    return reject(format!("{} is not an instance of {name}", t.label));
                }
                None
            }
        }
    } else {
        if t.tag.is_some() {
            return reject("an inner node cannot carry a leaf tag".to_string());
        }
        let delta: Multiset<Formula> = t.children.iter().map(|c| c.label.clone()).collect();
        let target = Multiset::singleton(t.label.clone());
        let matched = sys
            .schemata
            .iter()
            .any(|s| match_consecution_exact(&s.premises, &s.conclusions, &delta, &target).is_some());
        if !matched {
            return reject(format!("no rule turns {delta} into {}", t.label));
        }
        for c in &t.children {
            if let Some(v) = check_node(sys, c, counter) {
                return Some(v);
            }
        }
        None
    }
}

/// The claim a tree argues for: its `hyp` leaves over its root.
pub fn tree_claim(t: &TreeProof) -> Consecution {
    Consecution { premises: t.hypotheses(), conclusions: Multiset::singleton(t.label.clone()) }
}

fn format_into(t: &TreeProof, depth: usize, out: &mut String) {
    out.push_str(&"  ".repeat(depth));
    match &t.tag {
        Some(LeafTag::Hyp) if t.children.is_empty() => out.push_str(&format!("hyp: {}\n", t.label)),
        Some(LeafTag::Axiom(name)) if t.children.is_empty() => {
            out.push_str(&format!("axiom {name}: {}\n", t.label));
        }
        _ => out.push_str(&format!("{}\n", t.label)),
    }
    for c in &t.children {
        format_into(c, depth + 1, out);
    }
}

/// Writes the indented text form: two spaces per level, leaves tagged
/// `hyp:` or `axiom <name>:`, inner nodes bare.
pub fn format_tree(t: &TreeProof) -> String {
    let mut out = String::new();
    format_into(t, 0, &mut out);
    out
}

#[derive(Debug, Error)]
pub enum TreeParseError {
    #[error("line {line}: indentation must be two spaces per level")]
    BadIndent { line: usize },
    #[error("line {line}: this node has no parent at the previous level")]
    OrphanDepth { line: usize },
    #[error("line {line}: a tree proof has a single root")]
    MultipleRoots { line: usize },
    #[error("line {line}: {err}")]
    BadSyntax { line: usize, err: ParseError },
    #[error("the input contains no tree")]
    Empty,
}

/// Parses the format written by [`format_tree`].  Blank lines and `#`
/// comments are skipped.
pub fn parse_tree(src: &str) -> Result<TreeProof, TreeParseError> {
    // Stack of (depth, node); children attach to the nearest shallower entry.
    let mut stack: Vec<(usize, TreeProof)> = Vec::new();
    let mut root: Option<TreeProof> = None;

    fn settle(stack: &mut Vec<(usize, TreeProof)>, root: &mut Option<TreeProof>, depth: usize) {
        while let Some((d, _)) = stack.last() {
            if *d < depth {
                break;
            }
            let (_, done) = stack.pop().unwrap();
            match stack.last_mut() {
                Some((_, parent)) => parent.children.push(done),
                None => *root = Some(done),
            }
        }
    }

    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let spaces = raw.len() - raw.trim_start_matches(' ').len();
        if spaces % 2 != 0 {
            return Err(TreeParseError::BadIndent { line });
        }
        let depth = spaces / 2;
        settle(&mut stack, &mut root, depth);
        if depth == 0 && root.is_some() {
            return Err(TreeParseError::MultipleRoots { line });
        }
        if stack.len() != depth {
            return Err(TreeParseError::OrphanDepth { line });
        }
        let text = raw.trim();
        let node = if let Some(rest) = text.strip_prefix("hyp:") {
            TreeProof::hyp(parse_formula(rest.trim()).map_err(|err| TreeParseError::BadSyntax { line, err })?)
        } else if let Some(rest) = text.strip_prefix("axiom ") {
            let (name, formula) = rest
                .split_once(':')
                .ok_or(TreeParseError::BadIndent { line })?;
            TreeProof::axiom(
                name.trim(),
                parse_formula(formula.trim()).map_err(|err| TreeParseError::BadSyntax { line, err })?,
            )
        } else {
            TreeProof::node(
                parse_formula(text).map_err(|err| TreeParseError::BadSyntax { line, err })?,
                vec![],
            )
        };
        stack.push((depth, node));
    }
    settle(&mut stack, &mut root, 0);
    root.ok_or(TreeParseError::Empty)
}
