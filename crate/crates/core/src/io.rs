//! The line-based structure file format.
//!
//! A file is a sequence of named blocks; a block starts with a kind
//! keyword and a name, and owns every following line up to the next block
//! keyword.  `#` starts a comment, blank lines are ignored.  The kinds:
//!
//! ```text
//! pomonoid N3                 # ordered commutative monoid
//! elements 0 1 2
//! zero 0
//! leq 0<=1 1<=2               # closed reflexively and transitively
//! add 1+1=2 1+2=2 2+2=2       # closed symmetrically; the zero row is
//!                             # filled in from the unit law first
//!
//! posemiring S                # adds mul/one to a pomonoid
//! module M                    # scalars <semiring>, carrier <pomonoid>,
//!                             # act s*a=b lines (unit/zero rows seeded)
//! dr D                        # over <pomonoid>, pairs a|-b, optional
//!                             # from-geq seeding line
//! do O                        # over <pomonoid>, image a: b c lines
//! ds C                        # over <pomonoid>, member a b lines
//!
//! algebra L3                  # finite algebra with optional tables
//! elements 0 1/2 1            # (or the single shorthand line `luk n`)
//! one 1
//! meet 0: 0 0 0               # one row per element, per table
//! const c0=0                  # named constants
//!
//! hypermatrix H               # algebra <name> + filter-gen [a,b] [c]
//! fuzzymatrix F               # chain n, threshold p/q|family, f id
//! sequents Q                  # algebra <name> + seq a b lines
//! ```
//!
//! Partial order/operation lines are completed exactly as the comments
//! say and nothing more; whatever is still missing afterwards is a parse
//! error, and whatever is inconsistent is left for `validate` to report.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use thiserror::Error;

use crate::multiset::Multiset;
use crate::semantics::{FiniteAlgebra, FuzzyMatrix, Hypermatrix, MultisetDownset, SequentModel, Threshold};
use crate::structures::deduction::{DeductiveOperator, DeductiveRelation, DeductiveSystem};
use crate::structures::module::FiniteModule;
use crate::structures::pomonoid::FinitePomonoid;
use crate::structures::semiring::FinitePoSemiring;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct IoError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, IoError> {
    Err(IoError { line, msg: msg.into() })
}

/// A deductive relation, operator, or system together with the name of
/// the pomonoid block it lives over.
#[derive(Debug, Clone)]
pub struct NamedOver<T> {
    pub name: String,
    pub over: String,
    pub item: T,
}

#[derive(Debug, Default)]
pub struct StructureFile {
    pub pomonoids: Vec<FinitePomonoid>,
    pub semirings: Vec<FinitePoSemiring>,
    pub modules: Vec<FiniteModule>,
    pub drs: Vec<NamedOver<DeductiveRelation>>,
    pub dos: Vec<NamedOver<DeductiveOperator>>,
    pub dss: Vec<NamedOver<DeductiveSystem>>,
    pub algebras: Vec<FiniteAlgebra>,
    pub hypermatrices: Vec<(String, Hypermatrix)>,
    pub fuzzies: Vec<(String, FuzzyMatrix)>,
    pub sequent_models: Vec<(String, SequentModel)>,
}

impl StructureFile {
    pub fn pomonoid(&self, name: &str) -> Option<&FinitePomonoid> {
        self.pomonoids.iter().find(|p| p.name == name)
    }

    pub fn semiring(&self, name: &str) -> Option<&FinitePoSemiring> {
        self.semirings.iter().find(|s| s.name == name)
    }

    pub fn algebra(&self, name: &str) -> Option<&FiniteAlgebra> {
        self.algebras.iter().find(|a| a.name == name)
    }
}

const BLOCK_KINDS: [&str; 10] = [
    "pomonoid", "posemiring", "module", "dr", "do", "ds", "algebra", "hypermatrix", "fuzzymatrix",
    "sequents",
];

struct Block {
    kind: String,
    name: String,
    start: usize,
    /// (line number, tokens) with comments stripped.
    lines: Vec<(usize, Vec<String>)>,
}

fn group_blocks(src: &str) -> Result<Vec<Block>, IoError> {
    let mut blocks: Vec<Block> = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let text = raw.split('#').next().unwrap_or("");
        let tokens: Vec<String> = text.split_whitespace().map(str::to_string).collect();
        if tokens.is_empty() {
            continue;
        }
        // `algebra X` doubles as the reference line of hypermatrix and
        // sequents blocks; the first such line inside one stays content.
        let is_reference = tokens[0] == "algebra"
            && blocks.last().is_some_and(|b| {
                matches!(b.kind.as_str(), "hypermatrix" | "sequents")
                    && !b.lines.iter().any(|(_, t)| t[0] == "algebra")
            });
        if BLOCK_KINDS.contains(&tokens[0].as_str()) && !is_reference {
            if tokens.len() != 2 {
                return err(line, format!("`{}` expects exactly a block name", tokens[0]));
            }
            blocks.push(Block { kind: tokens[0].clone(), name: tokens[1].clone(), start: line, lines: vec![] });
        } else {
            match blocks.last_mut() {
                Some(b) => b.lines.push((line, tokens)),
                None => return err(line, "content before the first block header"),
            }
        }
    }
    Ok(blocks)
}

/// Resolves an element name inside one block's carrier.
fn index_of(elems: &[String], tok: &str, line: usize) -> Result<usize, IoError> {
    elems
        .iter()
        .position(|e| e == tok)
        .ok_or_else(|| IoError { line, msg: format!("unknown element `{tok}`") })
}

/// One `elements`/`zero`/`one`-style line: the single permitted occurrence.
fn unique_line<'a>(
    b: &'a Block,
    key: &str,
) -> Result<Option<(usize, &'a [String])>, IoError> {
    let mut found = None;
    for (line, tokens) in &b.lines {
        if tokens[0] == key {
            if found.is_some() {
                return err(*line, format!("duplicate `{key}` line"));
            }
            found = Some((*line, &tokens[1..]));
        }
    }
    Ok(found)
}

fn required_line<'a>(b: &'a Block, key: &str) -> Result<(usize, &'a [String]), IoError> {
    unique_line(b, key)?.ok_or_else(|| IoError {
        line: b.start,
        msg: format!("{} `{}` needs a `{key}` line", b.kind, b.name),
    })
}

fn elements_of(b: &Block) -> Result<Vec<String>, IoError> {
    let (line, toks) = required_line(b, "elements")?;
    if toks.is_empty() {
        return err(line, "an empty carrier is not allowed");
    }
    let mut seen = BTreeSet::new();
    for t in toks {
        if !seen.insert(t) {
            return err(line, format!("element `{t}` listed twice"));
        }
    }
    Ok(toks.to_vec())
}

/// Splits `a<SEP>b` on the first occurrence of the separator.
fn split_pair<'a>(tok: &'a str, sep: &str, line: usize) -> Result<(&'a str, &'a str), IoError> {
    tok.split_once(sep)
        .ok_or_else(|| IoError { line, msg: format!("expected `x{sep}y`, found `{tok}`") })
}

/// Order matrix from `a<=b` tokens, closed reflexively and transitively.
fn build_leq(b: &Block, elems: &[String]) -> Result<Vec<bool>, IoError> {
    let n = elems.len();
    let mut leq = vec![false; n * n];
    for a in 0..n {
        leq[a * n + a] = true;
    }
    for (line, tokens) in &b.lines {
        if tokens[0] != "leq" {
            continue;
        }
        for tok in &tokens[1..] {
            let (x, y) = split_pair(tok, "<=", *line)?;
            leq[index_of(elems, x, *line)? * n + index_of(elems, y, *line)?] = true;
        }
    }
    for k in 0..n {
        for a in 0..n {
            for c in 0..n {
                if leq[a * n + k] && leq[k * n + c] {
                    leq[a * n + c] = true;
                }
            }
        }
    }
    Ok(leq)
}

/// Binary operation table from `a<op>b=c` tokens.  `seed` pre-fills rows
/// forced by the structure's laws (unit, annihilation); explicit entries
/// override it, leaving any inconsistency for validation to flag.
fn build_table(
    b: &Block,
    elems: &[String],
    key: &str,
    op: char,
    symmetric: bool,
    seed: &[(usize, usize, usize)],
) -> Result<Vec<usize>, IoError> {
    let n = elems.len();
    let mut table: Vec<Option<usize>> = vec![None; n * n];
    for &(x, y, z) in seed {
        table[x * n + y] = Some(z);
        if symmetric {
            table[y * n + x] = Some(z);
        }
    }
    for (line, tokens) in &b.lines {
        if tokens[0] != key {
            continue;
        }
        for tok in &tokens[1..] {
            let (lhs, rhs) = split_pair(tok, "=", *line)?;
            let (x, y) = split_pair(lhs, &op.to_string(), *line)?;
            let (x, y, z) =
                (index_of(elems, x, *line)?, index_of(elems, y, *line)?, index_of(elems, rhs, *line)?);
            table[x * n + y] = Some(z);
            if symmetric {
                table[y * n + x] = Some(z);
            }
        }
    }
    let mut out = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            match table[x * n + y] {
                Some(z) => out.push(z),
                None => {
                    return err(
                        b.start,
                        format!("{} `{}`: `{key}` leaves {}{op}{} undefined", b.kind, b.name, elems[x], elems[y]),
                    );
                }
            }
        }
    }
    Ok(out)
}

fn parse_pomonoid(b: &Block) -> Result<FinitePomonoid, IoError> {
    let elems = elements_of(b)?;
    let (zline, ztoks) = required_line(b, "zero")?;
    let [ztok] = ztoks else {
        return err(zline, "`zero` expects one element");
    };
    let zero = index_of(&elems, ztok, zline)?;
    let leq = build_leq(b, &elems)?;
    let seed: Vec<(usize, usize, usize)> = (0..elems.len()).map(|a| (zero, a, a)).collect();
    let add = build_table(b, &elems, "add", '+', true, &seed)?;
    Ok(FinitePomonoid { name: b.name.clone(), elems, leq, add, zero })
}

fn parse_semiring(b: &Block) -> Result<FinitePoSemiring, IoError> {
    let base = parse_pomonoid(b)?;
    let (oline, otoks) = required_line(b, "one")?;
    let [otok] = otoks else {
        return err(oline, "`one` expects one element");
    };
    let one = index_of(&base.elems, otok, oline)?;
    let n = base.elems.len();
    let mut seed: Vec<(usize, usize, usize)> = Vec::new();
    for a in 0..n {
        seed.extend([(one, a, a), (a, one, a), (base.zero, a, base.zero), (a, base.zero, base.zero)]);
    }
    let mul = build_table(b, &base.elems, "mul", '*', false, &seed)?;
    Ok(FinitePoSemiring {
        name: base.name,
        elems: base.elems,
        leq: base.leq,
        add: base.add,
        zero: base.zero,
        mul,
        one,
    })
}

fn parse_module(b: &Block, file: &StructureFile) -> Result<FiniteModule, IoError> {
    let (sline, stoks) = required_line(b, "scalars")?;
    let [sname] = stoks else {
        return err(sline, "`scalars` expects a posemiring name");
    };
    let scalars = file
        .semiring(sname)
        .ok_or_else(|| IoError { line: sline, msg: format!("unknown posemiring `{sname}`") })?
        .clone();
    let (cline, ctoks) = required_line(b, "carrier")?;
    let [cname] = ctoks else {
        return err(cline, "`carrier` expects a pomonoid name");
    };
    let carrier = file
        .pomonoid(cname)
        .ok_or_else(|| IoError { line: cline, msg: format!("unknown pomonoid `{cname}`") })?
        .clone();

    let (sn, cn) = (scalars.n(), carrier.n());
    let mut act: Vec<Option<usize>> = vec![None; sn * cn];
    for a in 0..cn {
        act[scalars.one * cn + a] = Some(a);
        act[scalars.zero * cn + a] = Some(carrier.zero);
    }
    for (line, tokens) in &b.lines {
        if tokens[0] != "act" {
            continue;
        }
        for tok in &tokens[1..] {
            let (lhs, rhs) = split_pair(tok, "=", *line)?;
            let (s, a) = split_pair(lhs, "*", *line)?;
            act[index_of(&scalars.elems, s, *line)? * cn + index_of(&carrier.elems, a, *line)?] =
                Some(index_of(&carrier.elems, rhs, *line)?);
        }
    }
    let act: Vec<usize> = act
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| IoError {
                line: b.start,
                msg: format!(
                    "module `{}`: {}*{} undefined",
                    b.name,
                    scalars.elems[i / cn],
                    carrier.elems[i % cn]
                ),
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(FiniteModule { name: b.name.clone(), scalars, carrier, act })
}

fn over_pomonoid<'a>(b: &Block, file: &'a StructureFile) -> Result<&'a FinitePomonoid, IoError> {
    let (line, toks) = required_line(b, "over")?;
    let [name] = toks else {
        return err(line, "`over` expects a pomonoid name");
    };
    file.pomonoid(name).ok_or_else(|| IoError { line, msg: format!("unknown pomonoid `{name}`") })
}

fn parse_dr(b: &Block, file: &StructureFile) -> Result<NamedOver<DeductiveRelation>, IoError> {
    let p = over_pomonoid(b, file)?;
    let n = p.n();
    let mut rel = vec![false; n * n];
    if unique_line(b, "from-geq")?.is_some() {
        rel = DeductiveRelation::geq_of(p).rel;
    }
    for (line, tokens) in &b.lines {
        if tokens[0] != "pairs" {
            continue;
        }
        for tok in &tokens[1..] {
            let (a, c) = split_pair(tok, "|-", *line)?;
            rel[index_of(&p.elems, a, *line)? * n + index_of(&p.elems, c, *line)?] = true;
        }
    }
    Ok(NamedOver { name: b.name.clone(), over: p.name.clone(), item: DeductiveRelation { n, rel } })
}

fn parse_do(b: &Block, file: &StructureFile) -> Result<NamedOver<DeductiveOperator>, IoError> {
    let p = over_pomonoid(b, file)?;
    let n = p.n();
    let mut img: Vec<Option<BTreeSet<usize>>> = vec![None; n];
    for (line, tokens) in &b.lines {
        if tokens[0] != "image" {
            continue;
        }
        let Some(key) = tokens.get(1).and_then(|t| t.strip_suffix(':')) else {
            return err(*line, "`image` expects `image <element>: <elements>`");
        };
        let a = index_of(&p.elems, key, *line)?;
        if img[a].is_some() {
            return err(*line, format!("duplicate image for `{key}`"));
        }
        let mut set = BTreeSet::new();
        for tok in &tokens[2..] {
            set.insert(index_of(&p.elems, tok, *line)?);
        }
        img[a] = Some(set);
    }
    let img: Vec<BTreeSet<usize>> = img
        .into_iter()
        .enumerate()
        .map(|(a, v)| {
            v.ok_or_else(|| IoError {
                line: b.start,
                msg: format!("do `{}`: no image for `{}`", b.name, p.elems[a]),
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(NamedOver { name: b.name.clone(), over: p.name.clone(), item: DeductiveOperator { n, img } })
}

fn parse_ds(b: &Block, file: &StructureFile) -> Result<NamedOver<DeductiveSystem>, IoError> {
    let p = over_pomonoid(b, file)?;
    let mut members = BTreeSet::new();
    for (line, tokens) in &b.lines {
        if tokens[0] != "member" {
            continue;
        }
        let mut set = BTreeSet::new();
        for tok in &tokens[1..] {
            set.insert(index_of(&p.elems, tok, *line)?);
        }
        members.insert(set);
    }
    Ok(NamedOver {
        name: b.name.clone(),
        over: p.name.clone(),
        item: DeductiveSystem { n: p.n(), members },
    })
}

/// Operation table from `key <elem>: v1 .. vn` row lines; `None` when the
/// block has no such rows at all.
fn build_rows(b: &Block, elems: &[String], key: &str) -> Result<Option<Vec<usize>>, IoError> {
    let n = elems.len();
    let mut rows: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut any = false;
    for (line, tokens) in &b.lines {
        if tokens[0] != key {
            continue;
        }
        any = true;
        let Some(name) = tokens.get(1).and_then(|t| t.strip_suffix(':')) else {
            return err(*line, format!("`{key}` expects `{key} <element>: <row>`"));
        };
        let a = index_of(elems, name, *line)?;
        if rows[a].is_some() {
            return err(*line, format!("duplicate `{key}` row for `{name}`"));
        }
        if tokens.len() - 2 != n {
            return err(*line, format!("`{key}` row needs {n} entries"));
        }
        let row: Vec<usize> =
            tokens[2..].iter().map(|t| index_of(elems, t, *line)).collect::<Result<_, _>>()?;
        rows[a] = Some(row);
    }
    if !any {
        return Ok(None);
    }
    let mut out = Vec::with_capacity(n * n);
    for (a, row) in rows.into_iter().enumerate() {
        match row {
            Some(r) => out.extend(r),
            None => {
                return err(b.start, format!("algebra `{}`: `{key}` has no row for `{}`", b.name, elems[a]));
            }
        }
    }
    Ok(Some(out))
}

fn parse_algebra(b: &Block) -> Result<FiniteAlgebra, IoError> {
    if let Some((line, toks)) = unique_line(b, "luk")? {
        let [ntok] = toks else {
            return err(line, "`luk` expects a chain size");
        };
        let n: usize = ntok.parse().map_err(|_| IoError { line, msg: format!("bad chain size `{ntok}`") })?;
        if n < 2 {
            return err(line, "a chain needs at least two points");
        }
        if b.lines.len() != 1 {
            return err(line, "`luk` generates the whole algebra; drop the other lines");
        }
        let mut a = FiniteAlgebra::luk_chain(n);
        a.name = b.name.clone();
        return Ok(a);
    }
    let elems = elements_of(b)?;
    let one = match unique_line(b, "one")? {
        Some((line, [tok])) => Some(index_of(&elems, tok, line)?),
        Some((line, _)) => return err(line, "`one` expects one element"),
        None => None,
    };
    let mut consts = BTreeMap::new();
    for (line, tokens) in &b.lines {
        if tokens[0] != "const" {
            continue;
        }
        for tok in &tokens[1..] {
            let (name, val) = split_pair(tok, "=", *line)?;
            if consts.insert(name.to_string(), index_of(&elems, val, *line)?).is_some() {
                return err(*line, format!("duplicate constant `{name}`"));
            }
        }
    }
    Ok(FiniteAlgebra {
        name: b.name.clone(),
        meet: build_rows(b, &elems, "meet")?,
        join: build_rows(b, &elems, "join")?,
        fuse: build_rows(b, &elems, "fuse")?,
        imp: build_rows(b, &elems, "imp")?,
        one,
        consts,
        elems,
    })
}

/// `[a,b,c]` over the algebra's element names; `[]` is the empty multiset.
fn parse_member(tok: &str, elems: &[String], line: usize) -> Result<Multiset<usize>, IoError> {
    let inner = tok
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| IoError { line, msg: format!("expected `[a,b]`, found `{tok}`") })?;
    let mut m = Multiset::new();
    for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        m.insert(index_of(elems, part, line)?);
    }
    Ok(m)
}

fn block_algebra(b: &Block, file: &StructureFile) -> Result<FiniteAlgebra, IoError> {
    let (line, toks) = required_line(b, "algebra")?;
    let [name] = toks else {
        return err(line, "`algebra` expects an algebra name");
    };
    file.algebra(name)
        .cloned()
        .ok_or_else(|| IoError { line, msg: format!("unknown algebra `{name}`") })
}

fn parse_hypermatrix(b: &Block, file: &StructureFile) -> Result<(String, Hypermatrix), IoError> {
    let algebra = block_algebra(b, file)?;
    let mut gens = Vec::new();
    for (line, tokens) in &b.lines {
        if tokens[0] != "filter-gen" {
            continue;
        }
        for tok in &tokens[1..] {
            gens.push(parse_member(tok, &algebra.elems, *line)?);
        }
    }
    Ok((b.name.clone(), Hypermatrix { algebra, filter: MultisetDownset::new(gens) }))
}

fn parse_fuzzymatrix(b: &Block) -> Result<(String, FuzzyMatrix), IoError> {
    let (cline, ctoks) = required_line(b, "chain")?;
    let [ctok] = ctoks else {
        return err(cline, "`chain` expects a size");
    };
    let chain: usize =
        ctok.parse().map_err(|_| IoError { line: cline, msg: format!("bad chain size `{ctok}`") })?;
    let threshold = match unique_line(b, "threshold")? {
        None => Threshold::Family,
        Some((line, [tok])) if tok == "family" => {
            let _ = line;
            Threshold::Family
        }
        Some((line, [tok])) => {
            let q: BigRational = tok
                .parse()
                .map_err(|_| IoError { line, msg: format!("bad threshold `{tok}`") })?;
            Threshold::At(q)
        }
        Some((line, _)) => return err(line, "`threshold` expects `family` or a rational"),
    };
    if let Some((line, toks)) = unique_line(b, "f")? {
        if toks != ["id".to_string()] {
            return err(line, "only `f id` is shipped; other maps must pass validation and none do yet");
        }
    }
    Ok((b.name.clone(), FuzzyMatrix::identity(chain, threshold)))
}

fn parse_sequents(b: &Block, file: &StructureFile) -> Result<(String, SequentModel), IoError> {
    let algebra = block_algebra(b, file)?;
    let mut seqs = BTreeSet::new();
    for (line, tokens) in &b.lines {
        if tokens[0] != "seq" {
            continue;
        }
        let seq: Vec<usize> =
            tokens[1..].iter().map(|t| index_of(&algebra.elems, t, *line)).collect::<Result<_, _>>()?;
        seqs.insert(seq);
    }
    Ok((b.name.clone(), SequentModel { algebra, seqs }))
}

pub fn parse_structure_file(src: &str) -> Result<StructureFile, IoError> {
    let blocks = group_blocks(src)?;
    for b in &blocks {
        if blocks.iter().filter(|o| o.kind == b.kind && o.name == b.name).count() > 1 {
            return err(b.start, format!("duplicate {} block `{}`", b.kind, b.name));
        }
    }
    let mut file = StructureFile::default();
    // Self-contained kinds first so later blocks can reference them by
    // name regardless of their position in the file.
    for b in &blocks {
        match b.kind.as_str() {
            "pomonoid" => file.pomonoids.push(parse_pomonoid(b)?),
            "posemiring" => file.semirings.push(parse_semiring(b)?),
            "algebra" => file.algebras.push(parse_algebra(b)?),
            _ => {}
        }
    }
    for b in &blocks {
        match b.kind.as_str() {
            "module" => file.modules.push(parse_module(b, &file)?),
            "dr" => file.drs.push(parse_dr(b, &file)?),
            "do" => file.dos.push(parse_do(b, &file)?),
            "ds" => file.dss.push(parse_ds(b, &file)?),
            "hypermatrix" => {
                let h = parse_hypermatrix(b, &file)?;
                file.hypermatrices.push(h);
            }
            "fuzzymatrix" => file.fuzzies.push(parse_fuzzymatrix(b)?),
            "sequents" => {
                let s = parse_sequents(b, &file)?;
                file.sequent_models.push(s);
            }
            _ => {}
        }
    }
    Ok(file)
}

fn format_rows(out: &mut String, elems: &[String], key: &str, table: &Option<Vec<usize>>) {
    let n = elems.len();
    if let Some(t) = table {
        for a in 0..n {
            let row: Vec<&str> = (0..n).map(|b| elems[t[a * n + b]].as_str()).collect();
            out.push_str(&format!("{key} {}: {}\n", elems[a], row.join(" ")));
        }
    }
}

/// Writes an algebra as a block that parses back to an equal value.
pub fn format_algebra_block(a: &FiniteAlgebra) -> String {
    let mut out = format!("algebra {}\nelements {}\n", a.name, a.elems.join(" "));
    if let Some(one) = a.one {
        out.push_str(&format!("one {}\n", a.elems[one]));
    }
    for (name, &val) in &a.consts {
        out.push_str(&format!("const {name}={}\n", a.elems[val]));
    }
    format_rows(&mut out, &a.elems, "meet", &a.meet);
    format_rows(&mut out, &a.elems, "join", &a.join);
    format_rows(&mut out, &a.elems, "fuse", &a.fuse);
    format_rows(&mut out, &a.elems, "imp", &a.imp);
    out
}

fn format_member(m: &Multiset<usize>, elems: &[String]) -> String {
    let names: Vec<&str> = m.occurrences().map(|&e| elems[e].as_str()).collect();
    format!("[{}]", names.join(","))
}

/// Writes a hypermatrix block (without its algebra, which is referenced by
/// name and must accompany it in the same file).
pub fn format_hypermatrix_block(name: &str, h: &Hypermatrix) -> String {
    let mut out = format!("hypermatrix {name}\nalgebra {}\n", h.algebra.name);
    let gens: Vec<String> =
        h.filter.generators().iter().map(|g| format_member(g, &h.algebra.elems)).collect();
    if !gens.is_empty() {
        out.push_str(&format!("filter-gen {}\n", gens.join(" ")));
    }
    out
}

/// Writes a sequent model block (algebra referenced by name, as above).
pub fn format_sequents_block(name: &str, s: &SequentModel) -> String {
    let mut out = format!("sequents {name}\nalgebra {}\n", s.algebra.name);
    for seq in &s.seqs {
        let names: Vec<&str> = seq.iter().map(|&e| s.algebra.elems[e].as_str()).collect();
        out.push_str(&format!("seq {}\n", names.join(" ")).replace("seq \n", "seq\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::deduction::{TrinityInput, trinity};

    const N3: &str = "\
# the truncated three-chain
pomonoid N3
elements 0 1 2
zero 0
leq 0<=1 1<=2
add 1+1=2 1+2=2 2+2=2
";

    #[test]
    fn the_reference_pomonoid_parses_and_validates() {
        let file = parse_structure_file(N3).unwrap();
        let p = file.pomonoid("N3").unwrap();
        assert_eq!(p.elems, ["0", "1", "2"]);
        assert!(p.le(0, 2), "transitive closure fills 0<=2");
        assert_eq!(p.plus(0, 2), 2, "the unit row comes from the unit law");
        assert_eq!(p.plus(2, 1), 2, "addition is closed symmetrically");
        assert!(p.validate().is_ok());
        assert_eq!(*p, FinitePomonoid::chain_truncated(3, "N3"));
    }

    #[test]
    fn missing_entries_are_parse_errors_not_guesses() {
        let src = "pomonoid P\nelements 0 1 2\nzero 0\nadd 1+1=2\n";
        let e = parse_structure_file(src).unwrap_err();
        assert!(e.msg.contains("undefined"), "{e}");

        let src = "pomonoid P\nelements 0 1\nzero 0\nadd 1+1=1\nelements 0 1\n";
        assert!(parse_structure_file(src).unwrap_err().msg.contains("duplicate"));

        let src = "elements 0 1\n";
        assert!(parse_structure_file(src).unwrap_err().msg.contains("before the first block"));
    }

    #[test]
    fn semiring_module_and_deduction_blocks_cross_reference() {
        let src = format!(
            "{N3}\nposemiring S2\nelements 0 1\nzero 0\none 1\nleq 0<=1\nadd 1+1=1\n\n\
pomonoid P2\nelements 0 1\nzero 0\nleq 0<=1\nadd 1+1=1\n\n\
module M\nscalars S2\ncarrier P2\n\n\
dr D\nover N3\nfrom-geq\npairs 1|-2\n\n\
do O\nover N3\nimage 0: 0\nimage 1: 1\nimage 2: 1 2\n\n\
ds C\nover N3\nmember\nmember 0\nmember 0 1\nmember 0 1 2\n"
        );
        let file = parse_structure_file(&src).unwrap();
        assert!(file.semiring("S2").unwrap().validate().is_ok());
        // 1 acts as identity, 0 collapses: the two-scalar module over the
        // idempotent two-chain, with both rows seeded from the laws.
        let m = &file.modules[0];
        assert!(m.validate().is_ok());
        assert_eq!(m.star(0, 1), 0);
        assert_eq!(m.star(1, 1), 1);

        let p = file.pomonoid("N3").unwrap();
        let d = &file.drs[0];
        assert!(d.item.derives(1, 0), "from-geq seeds the order pairs");
        assert!(d.item.derives(1, 2), "explicit pairs add to the seed");
        let t = trinity(p, &TrinityInput::Rel(d.item.clone()));
        assert!(t.validation.is_ok() && t.all_roundtrips_ok());

        assert_eq!(file.dos[0].item.img[2], BTreeSet::from([1, 2]));
        assert_eq!(file.dss[0].item.members.len(), 4);
    }

    #[test]
    fn algebra_blocks_round_trip_through_the_printer() {
        let src = "algebra L3\nluk 3\n";
        let file = parse_structure_file(src).unwrap();
        let a = file.algebra("L3").unwrap();
        assert_eq!(a.elems, ["0", "1/2", "1"]);
        assert!(a.validate_rl().is_ok());

        let printed = format_algebra_block(a);
        let reparsed = parse_structure_file(&printed).unwrap();
        assert_eq!(reparsed.algebra("L3").unwrap(), a);

        let consts = "algebra B\nelements 0 1\nconst c0=0 c1=1\n";
        let file = parse_structure_file(consts).unwrap();
        let b = file.algebra("B").unwrap();
        assert_eq!(b.consts.len(), 2);
        let printed = format_algebra_block(b);
        assert_eq!(parse_structure_file(&printed).unwrap().algebra("B").unwrap(), b);
    }

    #[test]
    fn hypermatrix_fuzzy_and_sequent_blocks_parse() {
        let src = "algebra L2\nluk 2\n\nhypermatrix H\nalgebra L2\nfilter-gen [1,1] [0]\n\n\
fuzzymatrix F\nchain 3\nthreshold 3/4\nf id\n\nsequents Q\nalgebra L2\nseq\nseq 1\nseq 1 0\n";
        let file = parse_structure_file(src).unwrap();
        let (name, h) = &file.hypermatrices[0];
        assert_eq!(name, "H");
        assert!(h.validate().is_ok());
        assert!(h.filter.contains(&Multiset::from_counts([(1usize, 2u32.into())])));

        let (_, f) = &file.fuzzies[0];
        assert_eq!(f.chain, 3);
        assert!(matches!(f.threshold, Threshold::At(_)));
        assert!(f.validate().is_ok());

        let (_, s) = &file.sequent_models[0];
        assert_eq!(s.seqs.len(), 3);
        assert!(s.seqs.contains(&vec![]));

        let printed = format!("{}\n{}", format_algebra_block(&h.algebra), format_hypermatrix_block("H", h));
        let back = parse_structure_file(&printed).unwrap();
        assert_eq!(back.hypermatrices[0].1, *h);

        let printed = format!("{}\n{}", format_algebra_block(&s.algebra), format_sequents_block("Q", s));
        assert_eq!(parse_structure_file(&printed).unwrap().sequent_models[0].1, *s);
    }

    #[test]
    fn bad_references_and_bad_members_are_reported_with_lines() {
        let e = parse_structure_file("hypermatrix H\nalgebra missing\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.msg.contains("unknown algebra"));

        let e = parse_structure_file("algebra L2\nluk 2\nhypermatrix H\nalgebra L2\nfilter-gen [2]\n")
            .unwrap_err();
        assert_eq!(e.line, 5);
        assert!(e.msg.contains("unknown element"));

        let e = parse_structure_file("fuzzymatrix F\nchain 3\nf square\n").unwrap_err();
        assert!(e.msg.contains("only `f id`"));
    }
}
