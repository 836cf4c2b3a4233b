//! C ABI over the mdrkit library.
//!
//! Conventions, uniform across the surface:
//!
//! * Every status-returning call answers with [`MdrStatus`], aligned with
//!   the CLI exit codes: affirmative, negative (with a witness string),
//!   inconclusive within the given budget, or input error.
//! * Strings passed in are NUL-terminated UTF-8; strings passed out are
//!   allocated here and must be released with [`mdr_string_free`].  Out
//!   parameters may be NULL when the caller does not want the payload.
//! * On [`MdrStatus::Error`] a human-readable message is available from
//!   [`mdr_last_error`] until the next call on the same thread.
//! * Panics never cross the boundary; they are caught and reported as
//!   [`MdrStatus::Error`].

use std::cell::RefCell;
use std::ffi::{CStr, CString, c_char};
use std::panic::{AssertUnwindSafe, catch_unwind};
use std::ptr;

use mdrkit::formula::{parse_consecution, parse_formula};
use mdrkit::io::parse_structure_file;
use mdrkit::proof::{
    AxiomaticSystem, Budget, SearchOutcome, Verdict, builtin_system, check_derivation,
    check_tree_proof, format_certificate, format_tree, load_system, parse_certificate, parse_tree,
    search_derivation, split_derivation,
};
use mdrkit::semantics::{Mode, MvVerdict, OracleOptions, hyper_consequence, mv_oracle};

/// Call outcome, matching the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MdrStatus {
    /// The affirmative answer: valid, derivable, accepted, holds.
    Ok = 0,
    /// The negative answer, with a witness in the out parameter.
    No = 1,
    /// Neither answer within the given budget.
    Inconclusive = 2,
    /// Bad input or internal failure; see `mdr_last_error`.
    Error = 3,
}

/// Opaque handle to a loaded proof system.
pub struct MdrSystem {
    _opaque: [u8; 0],
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("NULs were stripped"));
}

fn out_string(slot: *mut *mut c_char, text: String) {
    if slot.is_null() {
        return;
    }
    let text = text.replace('\0', " ");
    unsafe { *slot = CString::new(text).expect("NULs were stripped").into_raw() };
}

fn clear_out(slot: *mut *mut c_char) {
    if !slot.is_null() {
        unsafe { *slot = ptr::null_mut() };
    }
}

/// Reads a required NUL-terminated UTF-8 argument.
///
/// # Safety
/// `p` must be NULL or point at a NUL-terminated buffer.
unsafe fn in_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, String> {
    if p.is_null() {
        return Err(format!("{what} is NULL"));
    }
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| format!("{what} is not valid UTF-8"))
}

fn guarded(body: impl FnOnce() -> MdrStatus) -> MdrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("internal panic");
            MdrStatus::Error
        }
    }
}

fn system_ref<'a>(sys: *const MdrSystem) -> Result<&'a AxiomaticSystem, String> {
    if sys.is_null() {
        return Err("system handle is NULL".to_string());
    }
    Ok(unsafe { &*(sys as *const AxiomaticSystem) })
}

/// The crate version as a static string; never freed.
#[unsafe(no_mangle)]
pub extern "C" fn mdr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// The error message of the most recent failing call on this thread.
/// Borrowed; valid until the next API call on the same thread.
#[unsafe(no_mangle)]
pub extern "C" fn mdr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned through an out parameter.  NULL is a no-op.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn mdr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Loads a built-in system (`"MV_s"` or `"MV"`).  NULL on error.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn mdr_system_builtin(name: *const c_char) -> *mut MdrSystem {
    system_new(|| {
        let name = unsafe { in_str(name, "name") }?;
        builtin_system(name).map_err(|e| e.to_string())
    })
}

/// Loads a system from `axiom`/`rule` lines.  NULL on error.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn mdr_system_load(source: *const c_char) -> *mut MdrSystem {
    system_new(|| {
        let source = unsafe { in_str(source, "source") }?;
        load_system(source).map_err(|e| e.to_string())
    })
}

fn system_new(make: impl FnOnce() -> Result<AxiomaticSystem, String>) -> *mut MdrSystem {
    match catch_unwind(AssertUnwindSafe(make)) {
        Ok(Ok(sys)) => Box::into_raw(Box::new(sys)) as *mut MdrSystem,
        Ok(Err(msg)) => {
            set_last_error(msg);
            ptr::null_mut()
        }
        Err(_) => {
            set_last_error("internal panic");
            ptr::null_mut()
        }
    }
}

/// Releases a system handle.  NULL is a no-op.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn mdr_system_free(sys: *mut MdrSystem) {
    if !sys.is_null() {
        drop(unsafe { Box::from_raw(sys as *mut AxiomaticSystem) });
    }
}

/// Parses a consecution and hands back its canonical printing.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn mdr_parse_consecution(
    text: *const c_char,
    canonical: *mut *mut c_char,
) -> MdrStatus {
    clear_out(canonical);
    guarded(|| {
        let text = match unsafe { in_str(text, "text") } {
            Ok(t) => t,
            Err(e) => return error(e),
        };
        match parse_consecution(text) {
            Ok(c) => {
                out_string(canonical, c.to_string());
                MdrStatus::Ok
            }
            Err(e) => error(e.to_string()),
        }
    })
}

/// Decides a consecution over Łukasiewicz chains of 2..=`max_chain` points
/// plus `samples` seeded rational valuations.  `Ok` means no counterexample
/// was found; `No` hands back the refuting valuation, one `var=value` line
/// per variable plus an `lhs=.. rhs=..` line.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn mdr_oracle_mv(
    consecution: *const c_char,
    max_chain: u32,
    samples: u32,
    seed: u64,
    witness: *mut *mut c_char,
) -> MdrStatus {
    clear_out(witness);
    guarded(|| {
        let text = match unsafe { in_str(consecution, "consecution") } {
            Ok(t) => t,
            Err(e) => return error(e),
        };
        let c = match parse_consecution(text) {
            Ok(c) => c,
            Err(e) => return error(e.to_string()),
        };
        let opts = OracleOptions {
            max_chain: max_chain as usize,
            samples: samples as usize,
            seed,
            jobs: 1,
        };
        match mv_oracle(&c, &opts) {
            Ok(MvVerdict::ValidUpTo { .. }) => MdrStatus::Ok,
            Ok(MvVerdict::Invalid(w)) => {
                let mut lines: Vec<String> =
                    w.valuation.iter().map(|(v, x)| format!("{v}={x}")).collect();
                lines.push(format!("lhs={} rhs={}", w.lhs, w.rhs));
                out_string(witness, lines.join("\n"));
                MdrStatus::No
            }
            Err(e) => error(e.to_string()),
        }
    })
}

/// Searches for a derivation of `claim` within `depth` steps and
/// `max_nodes` expansions.  `Ok` hands back a replayable certificate;
/// `Inconclusive` means the bounded search found nothing.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn mdr_derive(
    sys: *const MdrSystem,
    claim: *const c_char,
    depth: u32,
    max_nodes: u32,
    certificate: *mut *mut c_char,
) -> MdrStatus {
    clear_out(certificate);
    guarded(|| {
        let (sys, text) = match system_ref(sys)
            .and_then(|s| Ok((s, unsafe { in_str(claim, "claim") }?)))
        {
            Ok(x) => x,
            Err(e) => return error(e),
        };
        let c = match parse_consecution(text) {
            Ok(c) => c,
            Err(e) => return error(e.to_string()),
        };
        let budget = Budget { max_depth: depth as usize, max_nodes: max_nodes as usize };
        match search_derivation(sys, &c, &budget) {
            SearchOutcome::Found(d) => {
                out_string(certificate, format_certificate(&d, &c));
                MdrStatus::Ok
            }
            SearchOutcome::NotFound { .. } => MdrStatus::Inconclusive,
        }
    })
}

/// Replays a certificate.  A non-NULL `claim` overrides the certificate's
/// header.  `No` hands back the rejection reason.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn mdr_check_certificate(
    sys: *const MdrSystem,
    certificate: *const c_char,
    claim: *const c_char,
    reason: *mut *mut c_char,
) -> MdrStatus {
    clear_out(reason);
    guarded(|| {
        let (sys, src) = match system_ref(sys)
            .and_then(|s| Ok((s, unsafe { in_str(certificate, "certificate") }?)))
        {
            Ok(x) => x,
            Err(e) => return error(e),
        };
        let (d, header) = match parse_certificate(src) {
            Ok(x) => x,
            Err(e) => return error(e.to_string()),
        };
        let goal = if claim.is_null() {
            header
        } else {
            match unsafe { in_str(claim, "claim") }.and_then(|t| {
                parse_consecution(t).map_err(|e| e.to_string())
            }) {
                Ok(c) => c,
                Err(e) => return error(e),
            }
        };
        verdict_status(check_derivation(sys, &d, &goal), reason)
    })
}

/// Checks a tree proof against a claim with a single conclusion.
/// `No` hands back the rejection reason.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn mdr_check_tree(
    sys: *const MdrSystem,
    tree: *const c_char,
    claim: *const c_char,
    reason: *mut *mut c_char,
) -> MdrStatus {
    clear_out(reason);
    guarded(|| {
        let parts = system_ref(sys).and_then(|s| {
            Ok((s, unsafe { in_str(tree, "tree") }?, unsafe { in_str(claim, "claim") }?))
        });
        let (sys, tree_src, claim_text) = match parts {
            Ok(x) => x,
            Err(e) => return error(e),
        };
        let t = match parse_tree(tree_src) {
            Ok(t) => t,
            Err(e) => return error(e.to_string()),
        };
        let c = match parse_consecution(claim_text) {
            Ok(c) => c,
            Err(e) => return error(e.to_string()),
        };
        let mut conclusions = c.conclusions.occurrences();
        let (Some(goal), None) = (conclusions.next(), conclusions.next()) else {
            return error("a tree proof claims exactly one conclusion");
        };
        match check_tree_proof(sys, &t, &c.premises, goal) {
            Ok(v) => verdict_status(v, reason),
            Err(e) => error(e.to_string()),
        }
    })
}

/// Splits an accepted certificate at one occurrence of `formula`: out come
/// the tree proof of that occurrence and the residual certificate.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn mdr_split(
    sys: *const MdrSystem,
    certificate: *const c_char,
    formula: *const c_char,
    tree: *mut *mut c_char,
    rest: *mut *mut c_char,
) -> MdrStatus {
    clear_out(tree);
    clear_out(rest);
    guarded(|| {
        let parts = system_ref(sys).and_then(|s| {
            Ok((s, unsafe { in_str(certificate, "certificate") }?, unsafe {
                in_str(formula, "formula")
            }?))
        });
        let (sys, src, formula_text) = match parts {
            Ok(x) => x,
            Err(e) => return error(e),
        };
        let (d, claim) = match parse_certificate(src) {
            Ok(x) => x,
            Err(e) => return error(e.to_string()),
        };
        let phi = match parse_formula(formula_text) {
            Ok(f) => f,
            Err(e) => return error(e.to_string()),
        };
        match split_derivation(sys, &d, &claim, &phi) {
            Ok(s) => {
                out_string(tree, format_tree(&s.tree));
                out_string(rest, format_certificate(&s.rest, &s.rest_claim));
                MdrStatus::Ok
            }
            Err(e) => error(e.to_string()),
        }
    })
}

/// Evaluates a consecution in every hypermatrix of a structure source
/// (contextually when `contextual` is non-zero, plain otherwise).  `No`
/// hands back one witness line per failing hypermatrix.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn mdr_hyper(
    structures: *const c_char,
    consecution: *const c_char,
    contextual: i32,
    witness: *mut *mut c_char,
) -> MdrStatus {
    clear_out(witness);
    guarded(|| {
        let parts = unsafe { in_str(structures, "structures") }
            .and_then(|s| Ok((s, unsafe { in_str(consecution, "consecution") }?)));
        let (src, claim_text) = match parts {
            Ok(x) => x,
            Err(e) => return error(e),
        };
        let file = match parse_structure_file(src) {
            Ok(f) => f,
            Err(e) => return error(e.to_string()),
        };
        if file.hypermatrices.is_empty() {
            return error("no hypermatrix blocks in the input");
        }
        let c = match parse_consecution(claim_text) {
            Ok(c) => c,
            Err(e) => return error(e.to_string()),
        };
        let mode = if contextual != 0 { Mode::Contextual } else { Mode::Plain };
        let mut failures = Vec::new();
        for (name, h) in &file.hypermatrices {
            match hyper_consequence(h, &c, mode) {
                Ok(v) if v.holds => {}
                Ok(v) => {
                    let val = v.valuation.expect("failing verdicts carry a valuation");
                    let assignment: Vec<String> = val
                        .iter()
                        .map(|(var, &e)| format!("{var}={}", h.algebra.elems[e]))
                        .collect();
                    let mut line = format!("{name}: {}", assignment.join(", "));
                    if let Some(ctx) = v.context {
                        let names: Vec<&str> =
                            ctx.occurrences().map(|&e| h.algebra.elems[e].as_str()).collect();
                        line.push_str(&format!(" context [{}]", names.join(",")));
                    }
                    failures.push(line);
                }
                Err(e) => return error(format!("{name}: {e}")),
            }
        }
        if failures.is_empty() {
            MdrStatus::Ok
        } else {
            out_string(witness, failures.join("\n"));
            MdrStatus::No
        }
    })
}

fn verdict_status(v: Verdict, reason: *mut *mut c_char) -> MdrStatus {
    match v {
        Verdict::Accepted => MdrStatus::Ok,
        rejected => {
            out_string(reason, rejected.to_string());
            MdrStatus::No
        }
    }
}

fn error(msg: impl Into<String>) -> MdrStatus {
    set_last_error(msg);
    MdrStatus::Error
}
