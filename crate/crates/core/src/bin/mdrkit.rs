//! Command-line front end.
//!
//! Exit codes, uniformly: 0 the affirmative answer, 1 the negative answer
//! (with a witness), 2 inconclusive within the given budget, 3 bad input.
//! All output is deterministic for fixed inputs and flags; `--porcelain`
//! switches to one tab-separated `key=value` record per line.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mdrkit::formula::{parse_consecution, parse_formula};
use mdrkit::io::{
    StructureFile, format_algebra_block, format_hypermatrix_block, format_sequents_block,
    parse_structure_file,
};
use mdrkit::multiset::Multiset;
use mdrkit::proof::{
    AxiomaticSystem, BUILTIN_NAMES, Budget, SearchOutcome, builtin_system, check_derivation,
    check_tree_proof, format_certificate, format_tree, load_system, parse_certificate, parse_tree,
    search_derivation, split_derivation,
};
use mdrkit::semantics::{
    Mode, MvVerdict, OracleOptions, hyper_consequence, leibniz, mv_oracle, reduce_model,
    to_multisets, to_sequents,
};
use mdrkit::structures::ValidationReport;
use mdrkit::structures::deduction::{TrinityInput, enumerate_drs, trinity};
use mdrkit::structures::acr::bj_diagram_check;

#[derive(Parser)]
#[command(name = "mdrkit", version, about = "Consequence relations on formula multisets")]
struct Cli {
    /// One machine-readable record per line: tab-separated key=value pairs.
    #[arg(long, global = true)]
    porcelain: bool,
    /// Worker threads for semantic scans; never affects any verdict.
    #[arg(long, global = true, env = "MDRKIT_JOBS", default_value_t = 1)]
    jobs: usize,
    /// Seed for the sampled part of oracle scans.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a consecution (or bare formula) and print its canonical form.
    Parse { text: String },
    /// Validate every structure in a file against its laws.
    Validate { file: String },
    /// Enumerate deductive relations per pomonoid and check the
    /// relation/operator/system conversions round-trip on each.
    Trinity { file: String },
    /// Check the set-level companion diagrams over each pomonoid.
    Bj { file: String },
    /// Replay-check a derivation certificate or a tree proof.
    Check {
        /// Builtin system name or path to a system file.
        system: String,
        /// Certificate (`claim:`/`step:`/`by:` lines) or tree-proof file.
        derivation: String,
        /// Overrides the certificate's claim; required for tree proofs.
        claim: Option<String>,
    },
    /// Search for a derivation of a claim, bounded by depth and node count.
    Derive {
        system: String,
        claim: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 200_000)]
        max_nodes: usize,
    },
    /// Split an accepted certificate into a tree proof of one conclusion
    /// plus a residual certificate for the rest.
    Split { system: String, derivation: String, formula: String },
    /// Decide a consecution over Łukasiewicz chains plus rational samples.
    OracleMv {
        consecution: String,
        #[arg(long, default_value_t = 11)]
        max_chain: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Evaluate a consecution in every hypermatrix of a file.
    Hyper {
        file: String,
        consecution: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Contextual)]
        mode: ModeArg,
    },
    /// Largest compatible congruence and the reduced model, per hypermatrix.
    Leibniz { file: String },
    /// Convert between hypermatrix and sequent-model presentations.
    Gentzen {
        file: String,
        #[arg(long, value_enum)]
        dir: Direction,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Quantify over designated contexts as well as valuations.
    Contextual,
    /// Valuations only.
    Plain,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    ToSequents,
    ToMultisets,
}

/// Report sink: human lines or porcelain records, never both.
struct Out {
    porcelain: bool,
}

impl Out {
    fn human(&self, line: impl AsRef<str>) {
        if !self.porcelain {
            println!("{}", line.as_ref());
        }
    }

    fn record(&self, pairs: &[(&str, String)]) {
        if self.porcelain {
            let cells: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
            println!("{}", cells.join("\t"));
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Out { porcelain: cli.porcelain };
    match run(&cli, &out) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

/// `Err` is an input problem (exit 3); `Ok` carries the verdict code.
fn run(cli: &Cli, out: &Out) -> Result<u8, String> {
    match &cli.cmd {
        Cmd::Parse { text } => cmd_parse(out, text),
        Cmd::Validate { file } => cmd_validate(out, file),
        Cmd::Trinity { file } => cmd_trinity(out, file),
        Cmd::Bj { file } => cmd_bj(out, file),
        Cmd::Check { system, derivation, claim } => cmd_check(out, system, derivation, claim.as_deref()),
        Cmd::Derive { system, claim, depth, max_nodes } => {
            cmd_derive(out, system, claim, *depth, *max_nodes)
        }
        Cmd::Split { system, derivation, formula } => cmd_split(out, system, derivation, formula),
        Cmd::OracleMv { consecution, max_chain, samples } => {
            cmd_oracle(out, consecution, *max_chain, *samples, cli.seed, cli.jobs)
        }
        Cmd::Hyper { file, consecution, mode } => cmd_hyper(out, file, consecution, *mode),
        Cmd::Leibniz { file } => cmd_leibniz(out, file),
        Cmd::Gentzen { file, dir } => cmd_gentzen(out, file, *dir),
    }
}

fn read_file(path: &str) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

fn read_structures(path: &str) -> Result<StructureFile, String> {
    parse_structure_file(&read_file(path)?).map_err(|e| format!("{path}:{e}"))
}

/// A builtin name, or else the path of a system file.
fn resolve_system(spec: &str) -> Result<AxiomaticSystem, String> {
    if BUILTIN_NAMES.contains(&spec) {
        return builtin_system(spec).map_err(|e| e.to_string());
    }
    load_system(&read_file(spec)?).map_err(|e| format!("{spec}: {e}"))
}

fn cmd_parse(out: &Out, text: &str) -> Result<u8, String> {
    match parse_consecution(text) {
        Ok(c) => {
            out.human(c.to_string());
            out.record(&[
                ("kind", "consecution".into()),
                ("premises", c.premises.to_string()),
                ("conclusions", c.conclusions.to_string()),
            ]);
            Ok(0)
        }
        Err(ce) => match parse_formula(text) {
            Ok(f) => {
                out.human(f.to_string());
                out.record(&[("kind", "formula".into()), ("text", f.to_string())]);
                Ok(0)
            }
            // The consecution error names the position in the full input,
            // so it is the more useful one when both parses fail.
            Err(_) => Err(ce.to_string()),
        },
    }
}

/// Prints one status line per object; returns whether all reports were clean.
struct Tally {
    ok: bool,
}

impl Tally {
    fn push(&mut self, out: &Out, kind: &str, name: &str, r: &ValidationReport) {
        let status = if r.is_ok() { "ok" } else { "invalid" };
        out.human(format!("{kind} {name}: {status}"));
        for v in r.violations.iter().chain(&r.internal_errors) {
            out.human(format!("  {v}"));
        }
        out.record(&[
            ("kind", kind.into()),
            ("name", name.into()),
            ("status", status.into()),
            ("violations", (r.violations.len() + r.internal_errors.len()).to_string()),
        ]);
        self.ok &= r.is_ok();
    }
}

fn cmd_validate(out: &Out, file: &str) -> Result<u8, String> {
    let sf = read_structures(file)?;
    let mut t = Tally { ok: true };
    for p in &sf.pomonoids {
        t.push(out, "pomonoid", &p.name, &p.validate());
    }
    for s in &sf.semirings {
        t.push(out, "posemiring", &s.name, &s.validate());
    }
    for m in &sf.modules {
        t.push(out, "module", &m.name, &m.validate());
    }
    for d in &sf.drs {
        let p = sf.pomonoid(&d.over).expect("parser resolved the reference");
        t.push(out, "dr", &d.name, &mdrkit::structures::deduction::validate_dr(p, &d.item));
    }
    for d in &sf.dos {
        let p = sf.pomonoid(&d.over).expect("parser resolved the reference");
        t.push(out, "do", &d.name, &mdrkit::structures::deduction::validate_do(p, &d.item));
    }
    for d in &sf.dss {
        let p = sf.pomonoid(&d.over).expect("parser resolved the reference");
        t.push(out, "ds", &d.name, &mdrkit::structures::deduction::validate_ds(p, &d.item));
    }
    for a in &sf.algebras {
        // The residuated-lattice laws only make sense once every operation
        // is present; a partial signature is still a well-formed algebra.
        let fully_equipped =
            a.meet.is_some() && a.join.is_some() && a.fuse.is_some() && a.imp.is_some() && a.one.is_some();
        let r = if fully_equipped { a.validate_rl() } else { ValidationReport::new() };
        t.push(out, "algebra", &a.name, &r);
    }
    for (name, h) in &sf.hypermatrices {
        t.push(out, "hypermatrix", name, &h.validate());
    }
    for (name, f) in &sf.fuzzies {
        t.push(out, "fuzzymatrix", name, &f.validate());
    }
    for (name, _) in &sf.sequent_models {
        t.push(out, "sequents", name, &ValidationReport::new());
    }
    Ok(if t.ok { 0 } else { 1 })
}

fn cmd_trinity(out: &Out, file: &str) -> Result<u8, String> {
    let sf = read_structures(file)?;
    let mut any_fail = false;
    let mut truncated = false;
    for p in &sf.pomonoids {
        let e = enumerate_drs(p, 5, 1 << 16).map_err(|e| format!("{}: {e}", p.name))?;
        truncated |= e.truncated;
        let mut bad_roundtrips = 0usize;
        for d in &e.drs {
            let rep = trinity(p, &TrinityInput::Rel(d.clone()));
            if !rep.all_roundtrips_ok() || !rep.validation.is_ok() {
                bad_roundtrips += 1;
            }
        }
        any_fail |= bad_roundtrips > 0;
        let suffix = if e.truncated { " (truncated)" } else { "" };
        out.human(format!(
            "pomonoid {}: {} deductive relations{suffix}; roundtrip failures: {bad_roundtrips}",
            p.name,
            e.drs.len()
        ));
        out.record(&[
            ("kind", "trinity-census".into()),
            ("pomonoid", p.name.clone()),
            ("relations", e.drs.len().to_string()),
            ("truncated", e.truncated.to_string()),
            ("failures", bad_roundtrips.to_string()),
        ]);
    }
    let named: Vec<(&str, &str, TrinityInput)> = sf
        .drs
        .iter()
        .map(|d| ("dr", d.name.as_str(), TrinityInput::Rel(d.item.clone())))
        .chain(sf.dos.iter().map(|d| ("do", d.name.as_str(), TrinityInput::Op(d.item.clone()))))
        .chain(sf.dss.iter().map(|d| ("ds", d.name.as_str(), TrinityInput::Sys(d.item.clone()))))
        .collect();
    for (kind, name, input) in named {
        let over = match &input {
            TrinityInput::Rel(_) => sf.drs.iter().find(|d| d.name == name).map(|d| &d.over),
            TrinityInput::Op(_) => sf.dos.iter().find(|d| d.name == name).map(|d| &d.over),
            TrinityInput::Sys(_) => sf.dss.iter().find(|d| d.name == name).map(|d| &d.over),
        }
        .expect("names come from the same lists");
        let p = sf.pomonoid(over).expect("parser resolved the reference");
        let rep = trinity(p, &input);
        let ok = rep.all_roundtrips_ok() && rep.validation.is_ok();
        any_fail |= !ok;
        out.human(format!("{kind} {name}: {}", if ok { "roundtrips ok" } else { "FAILED" }));
        if !rep.validation.is_ok() {
            for v in &rep.validation.violations {
                out.human(format!("  {v}"));
            }
        }
        for (square, good) in rep.roundtrips.iter().filter(|(_, good)| !good) {
            let _ = good;
            out.human(format!("  roundtrip {square} failed"));
        }
        out.record(&[
            ("kind", "trinity".into()),
            ("object", format!("{kind}/{name}")),
            ("ok", ok.to_string()),
        ]);
    }
    Ok(if any_fail {
        1
    } else if truncated {
        2
    } else {
        0
    })
}

fn cmd_bj(out: &Out, file: &str) -> Result<u8, String> {
    let sf = read_structures(file)?;
    if sf.pomonoids.is_empty() {
        return Err(format!("{file}: no pomonoid blocks"));
    }
    let mut ok = true;
    for p in &sf.pomonoids {
        let rep = bj_diagram_check(p).map_err(|e| format!("{}: {e}", p.name))?;
        ok &= rep.report.is_ok();
        let status = if rep.report.is_ok() { "ok" } else { "FAILED" };
        out.human(format!(
            "pomonoid {}: {} relations, {} squares: {status}",
            p.name, rep.relations_checked, rep.squares_checked
        ));
        for v in rep.report.violations.iter().chain(&rep.report.internal_errors) {
            out.human(format!("  {v}"));
        }
        out.record(&[
            ("kind", "bj".into()),
            ("pomonoid", p.name.clone()),
            ("relations", rep.relations_checked.to_string()),
            ("squares", rep.squares_checked.to_string()),
            ("ok", rep.report.is_ok().to_string()),
        ]);
    }
    Ok(if ok { 0 } else { 1 })
}

/// The first content line decides the proof format: certificates open with
/// their `claim:` header, tree proofs never do.
fn looks_like_certificate(src: &str) -> bool {
    src.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("claim:"))
}

fn cmd_check(out: &Out, system: &str, derivation: &str, claim: Option<&str>) -> Result<u8, String> {
    let sys = resolve_system(system)?;
    let src = read_file(derivation)?;
    let claim_arg = claim.map(parse_consecution).transpose().map_err(|e| e.to_string())?;
    let verdict = if looks_like_certificate(&src) {
        let (d, header) = parse_certificate(&src).map_err(|e| format!("{derivation}: {e}"))?;
        let claim = claim_arg.unwrap_or(header);
        check_derivation(&sys, &d, &claim)
    } else {
        let t = parse_tree(&src).map_err(|e| format!("{derivation}: {e}"))?;
        let claim = claim_arg.ok_or("a tree proof needs an explicit claim argument")?;
        let mut conclusions = claim.conclusions.occurrences();
        let (Some(goal), None) = (conclusions.next(), conclusions.next()) else {
            return Err("a tree proof claims exactly one conclusion".into());
        };
        check_tree_proof(&sys, &t, &claim.premises, goal).map_err(|e| e.to_string())?
    };
    out.human(verdict.to_string());
    out.record(&[("kind", "check".into()), ("verdict", verdict.to_string())]);
    Ok(if verdict.is_accepted() { 0 } else { 1 })
}

fn cmd_derive(
    out: &Out,
    system: &str,
    claim: &str,
    depth: usize,
    max_nodes: usize,
) -> Result<u8, String> {
    let sys = resolve_system(system)?;
    let claim = parse_consecution(claim).map_err(|e| e.to_string())?;
    let budget = Budget { max_depth: depth, max_nodes };
    match search_derivation(&sys, &claim, &budget) {
        SearchOutcome::Found(d) => {
            if out.porcelain {
                out.record(&[
                    ("kind", "derive".into()),
                    ("outcome", "found".into()),
                    ("steps", (d.steps.len() - 1).to_string()),
                ]);
            } else {
                print!("{}", format_certificate(&d, &claim));
            }
            Ok(0)
        }
        SearchOutcome::NotFound { explored, budget_exhausted } => {
            out.human(format!(
                "inconclusive: no derivation within depth {depth} ({explored} states explored{})",
                if budget_exhausted { ", node budget exhausted" } else { "" }
            ));
            out.record(&[
                ("kind", "derive".into()),
                ("outcome", "inconclusive".into()),
                ("explored", explored.to_string()),
                ("exhausted", budget_exhausted.to_string()),
            ]);
            Ok(2)
        }
    }
}

fn cmd_split(out: &Out, system: &str, derivation: &str, formula: &str) -> Result<u8, String> {
    let sys = resolve_system(system)?;
    let src = read_file(derivation)?;
    let (d, claim) = parse_certificate(&src).map_err(|e| format!("{derivation}: {e}"))?;
    let phi = parse_formula(formula).map_err(|e| e.to_string())?;
    let split = split_derivation(&sys, &d, &claim, &phi).map_err(|e| e.to_string())?;
    if out.porcelain {
        out.record(&[
            ("kind", "split".into()),
            ("tree_premises", split.tree_premises.to_string()),
            ("rest_claim", split.rest_claim.to_string()),
        ]);
    } else {
        println!("# tree proof of {phi} from {}", split.tree_premises);
        print!("{}", format_tree(&split.tree));
        println!("# residual derivation");
        print!("{}", format_certificate(&split.rest, &split.rest_claim));
    }
    Ok(0)
}

fn cmd_oracle(
    out: &Out,
    consecution: &str,
    max_chain: usize,
    samples: usize,
    seed: u64,
    jobs: usize,
) -> Result<u8, String> {
    let c = parse_consecution(consecution).map_err(|e| e.to_string())?;
    let opts = OracleOptions { max_chain, samples, seed, jobs };
    match mv_oracle(&c, &opts).map_err(|e| e.to_string())? {
        MvVerdict::ValidUpTo { max_chain, samples } => {
            out.human(format!("Valid≤{max_chain}"));
            out.record(&[
                ("kind", "oracle-mv".into()),
                ("verdict", "valid".into()),
                ("max_chain", max_chain.to_string()),
                ("samples", samples.to_string()),
            ]);
            Ok(0)
        }
        MvVerdict::Invalid(w) => {
            out.human("Invalid");
            for (var, value) in &w.valuation {
                out.human(format!("{var}={value}"));
            }
            out.human(format!("lhs={} rhs={}", w.lhs, w.rhs));
            let witness: Vec<String> =
                w.valuation.iter().map(|(var, value)| format!("{var}={value}")).collect();
            out.record(&[
                ("kind", "oracle-mv".into()),
                ("verdict", "invalid".into()),
                ("witness", witness.join(",")),
                ("lhs", w.lhs.to_string()),
                ("rhs", w.rhs.to_string()),
            ]);
            Ok(1)
        }
    }
}

fn cmd_hyper(out: &Out, file: &str, consecution: &str, mode: ModeArg) -> Result<u8, String> {
    let sf = read_structures(file)?;
    if sf.hypermatrices.is_empty() {
        return Err(format!("{file}: no hypermatrix blocks"));
    }
    let c = parse_consecution(consecution).map_err(|e| e.to_string())?;
    let mode = match mode {
        ModeArg::Contextual => Mode::Contextual,
        ModeArg::Plain => Mode::Plain,
    };
    let mut all_hold = true;
    for (name, h) in &sf.hypermatrices {
        let v = hyper_consequence(h, &c, mode).map_err(|e| format!("{name}: {e}"))?;
        if v.holds {
            out.human(format!("{name}: holds"));
            out.record(&[("kind", "hyper".into()), ("name", name.clone()), ("holds", "true".into())]);
            continue;
        }
        all_hold = false;
        let val = v.valuation.expect("failing verdicts carry a valuation");
        let assignment: Vec<String> =
            val.iter().map(|(var, &e)| format!("{var}={}", h.algebra.elems[e])).collect();
        let ctx = v.context.map(|m| members_text(&m, &h.algebra.elems));
        let mut line = format!("{name}: fails at {}", assignment.join(", "));
        if let Some(ctx) = &ctx {
            let _ = write!(line, " with context {ctx}");
        }
        out.human(line);
        out.record(&[
            ("kind", "hyper".into()),
            ("name", name.clone()),
            ("holds", "false".into()),
            ("valuation", assignment.join(",")),
            ("context", ctx.unwrap_or_default()),
        ]);
    }
    Ok(if all_hold { 0 } else { 1 })
}

fn members_text(m: &Multiset<usize>, elems: &[String]) -> String {
    let names: Vec<&str> = m.occurrences().map(|&e| elems[e].as_str()).collect();
    format!("[{}]", names.join(","))
}

/// `{a b}{c}` with one brace group per congruence class.
fn partition_text(classes: &[usize], elems: &[String]) -> String {
    let ids: BTreeSet<usize> = classes.iter().copied().collect();
    let mut outp = String::new();
    for id in ids {
        let members: Vec<&str> = classes
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == id)
            .map(|(e, _)| elems[e].as_str())
            .collect();
        let _ = write!(outp, "{{{}}}", members.join(" "));
    }
    outp
}

fn cmd_leibniz(out: &Out, file: &str) -> Result<u8, String> {
    let sf = read_structures(file)?;
    if sf.hypermatrices.is_empty() {
        return Err(format!("{file}: no hypermatrix blocks"));
    }
    let mut ok = true;
    for (name, h) in &sf.hypermatrices {
        let res = leibniz(h).map_err(|e| format!("{name}: {e}"))?;
        let (reduced, _) = reduce_model(h).map_err(|e| format!("{name}: {e}"))?;
        ok &= res.report.is_ok();
        out.human(format!(
            "{name}: congruence {} ({} compatible); reduced carrier {}",
            partition_text(&res.classes, &h.algebra.elems),
            res.compatible_count,
            reduced.algebra.n()
        ));
        for v in res.report.violations.iter().chain(&res.report.internal_errors) {
            out.human(format!("  {v}"));
        }
        out.record(&[
            ("kind", "leibniz".into()),
            ("name", name.clone()),
            ("classes", partition_text(&res.classes, &h.algebra.elems)),
            ("compatible", res.compatible_count.to_string()),
            ("reduced_carrier", reduced.algebra.n().to_string()),
            ("ok", res.report.is_ok().to_string()),
        ]);
    }
    Ok(if ok { 0 } else { 1 })
}

fn cmd_gentzen(out: &Out, file: &str, dir: Direction) -> Result<u8, String> {
    let sf = read_structures(file)?;
    match dir {
        Direction::ToSequents => {
            if sf.hypermatrices.is_empty() {
                return Err(format!("{file}: no hypermatrix blocks"));
            }
            for (name, h) in &sf.hypermatrices {
                let s = to_sequents(h).map_err(|e| format!("{name}: {e}"))?;
                if out.porcelain {
                    out.record(&[
                        ("kind", "gentzen".into()),
                        ("name", name.clone()),
                        ("sequents", s.seqs.len().to_string()),
                    ]);
                } else {
                    print!("{}", format_algebra_block(&s.algebra));
                    print!("{}", format_sequents_block(name, &s));
                }
            }
            Ok(0)
        }
        Direction::ToMultisets => {
            if sf.sequent_models.is_empty() {
                return Err(format!("{file}: no sequents blocks"));
            }
            let mut ok = true;
            for (name, s) in &sf.sequent_models {
                let (h, report) = to_multisets(s);
                ok &= report.is_ok();
                if out.porcelain {
                    out.record(&[
                        ("kind", "gentzen".into()),
                        ("name", name.clone()),
                        ("generators", h.filter.generators().len().to_string()),
                        ("ok", report.is_ok().to_string()),
                    ]);
                } else {
                    print!("{}", format_algebra_block(&h.algebra));
                    print!("{}", format_hypermatrix_block(name, &h));
                }
                // Diagnostics go to stderr so stdout stays a parseable file.
                for v in report.violations.iter().chain(&report.internal_errors) {
                    eprintln!("{name}: {v}");
                }
            }
            Ok(if ok { 0 } else { 1 })
        }
    }
}
