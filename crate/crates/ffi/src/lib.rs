//! C ABI over `ppm-core`.
//!
//! Objects are opaque handles created by `ppm_*_new`-style functions and
//! released with the matching `*_free`. Every fallible call returns a
//! [`PpmStatus`]; on an error status, [`ppm_last_error`] describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ppm_core::decomp::{k_spiral, k_track};
use ppm_core::matcher::{run_matcher, Algorithm, MatchBudget, MatchOutcome};
use ppm_core::perm::{classify_principal, in_skew_star, longest_decreasing_length, Complexity, Permutation};
use ppm_core::reduction::{build_instance, parse_dimacs, twirl_instance, CnfFormula, Decision, ReductionInstance};
use ppm_core::Error;

/// Result codes. Non-negative values are answers, negative values errors.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PpmStatus {
    Ok = 0,
    /// The pattern does not occur / the formula is unsatisfiable.
    No = 1,
    /// The node budget ran out before an answer was found.
    Indeterminate = 2,
    NullPointer = -1,
    InvalidInput = -2,
    LimitExceeded = -3,
    BufferTooSmall = -4,
    Panic = -5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PpmAlgorithm {
    Brute = 0,
    Backtrack = 1,
    SeparatorDp = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PpmComplexity {
    Polynomial = 0,
    NpComplete = 1,
}

/// An owned permutation.
pub struct PpmPerm(Permutation);

/// A reduction instance built from a 3-SAT formula.
pub struct PpmReduction {
    formula: CnfFormula,
    instance: ReductionInstance,
    pattern: PpmPerm,
    text: PpmPerm,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> PpmStatus {
    match err {
        Error::TooLarge { .. } => PpmStatus::LimitExceeded,
        _ => PpmStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<PpmStatus, (PpmStatus, String)>) -> PpmStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("panic inside ppm");
            PpmStatus::Panic
        }
    }
}

fn fail(err: Error) -> (PpmStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (PpmStatus, String) {
    (PpmStatus::NullPointer, format!("{what} is null"))
}

unsafe fn perm_ref<'a>(p: *const PpmPerm, what: &str) -> Result<&'a Permutation, (PpmStatus, String)> {
    p.as_ref().map(|p| &p.0).ok_or_else(|| null(what))
}

unsafe fn c_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (PpmStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (PpmStatus::InvalidInput, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<PpmStatus, (PpmStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(PpmStatus::Ok)
}

/// Message for the last error on this thread, or null. The pointer stays
/// valid until the next `ppm_*` call on the same thread.
#[no_mangle]
pub extern "C" fn ppm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a permutation from `len` values (a rearrangement of 1..=len).
///
/// # Safety
/// `values` must point to `len` readable elements (or be null with
/// `len == 0`); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ppm_perm_new(values: *const usize, len: usize, out: *mut *mut PpmPerm) -> PpmStatus {
    guard(|| {
        let slice = if len == 0 {
            &[][..]
        } else if values.is_null() {
            return Err(null("values"));
        } else {
            std::slice::from_raw_parts(values, len)
        };
        let p = Permutation::new(slice.to_vec()).map_err(fail)?;
        put(out, PpmPerm(p))
    })
}

/// Parses space-separated values, or a run of single digits.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ppm_perm_parse(text: *const c_char, out: *mut *mut PpmPerm) -> PpmStatus {
    guard(|| {
        let p: Permutation = c_str(text, "text")?.parse().map_err(fail)?;
        put(out, PpmPerm(p))
    })
}

/// # Safety
/// `perm` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ppm_perm_free(perm: *mut PpmPerm) {
    if !perm.is_null() {
        drop(Box::from_raw(perm));
    }
}

/// # Safety
/// `perm` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn ppm_perm_len(perm: *const PpmPerm) -> usize {
    perm.as_ref().map_or(0, |p| p.0.len())
}

/// Copies the values into `buf`, which must hold `ppm_perm_len` entries.
///
/// # Safety
/// `perm` must be a live handle; `buf` must have room for `cap` elements.
#[no_mangle]
pub unsafe extern "C" fn ppm_perm_values(perm: *const PpmPerm, buf: *mut usize, cap: usize) -> PpmStatus {
    guard(|| {
        let p = perm_ref(perm, "perm")?;
        if cap < p.len() {
            return Err((PpmStatus::BufferTooSmall, format!("need {} entries, got {cap}", p.len())));
        }
        if !p.is_empty() {
            if buf.is_null() {
                return Err(null("buf"));
            }
            ptr::copy_nonoverlapping(p.values().as_ptr(), buf, p.len());
        }
        Ok(PpmStatus::Ok)
    })
}

/// Decides whether `pattern` occurs in `text`. Returns `Ok` and, when
/// `occurrence` is non-null, writes the 1-based text indices of a witness
/// (`ppm_perm_len(pattern)` entries); returns `No` or `Indeterminate`
/// otherwise. A `node_limit` of 0 means unlimited.
///
/// # Safety
/// `pattern` and `text` must be live handles; `occurrence` must be null or
/// have room for `ppm_perm_len(pattern)` elements.
#[no_mangle]
pub unsafe extern "C" fn ppm_contains(
    pattern: *const PpmPerm,
    text: *const PpmPerm,
    algorithm: PpmAlgorithm,
    node_limit: u64,
    occurrence: *mut usize,
) -> PpmStatus {
    guard(|| {
        let p = perm_ref(pattern, "pattern")?;
        let t = perm_ref(text, "text")?;
        let algo = match algorithm {
            PpmAlgorithm::Brute => Algorithm::Brute,
            PpmAlgorithm::Backtrack => Algorithm::Backtrack,
            PpmAlgorithm::SeparatorDp => Algorithm::SeparatorDp,
        };
        let budget = if node_limit == 0 {
            MatchBudget::unlimited()
        } else {
            MatchBudget::new(node_limit).map_err(fail)?
        };
        match run_matcher(algo, p, t, budget).map_err(fail)? {
            MatchOutcome::Contained(occ) => {
                if !occurrence.is_null() {
                    ptr::copy_nonoverlapping(occ.indices().as_ptr(), occurrence, occ.indices().len());
                }
                Ok(PpmStatus::Ok)
            }
            MatchOutcome::NotContained => Ok(PpmStatus::No),
            MatchOutcome::Indeterminate => Ok(PpmStatus::Indeterminate),
        }
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ppm_k_track(k: usize, out: *mut *mut PpmPerm) -> PpmStatus {
    guard(|| put(out, PpmPerm(k_track(k).map_err(fail)?.host().clone())))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ppm_k_spiral(k: usize, out: *mut *mut PpmPerm) -> PpmStatus {
    guard(|| put(out, PpmPerm(k_spiral(k).map_err(fail)?.host().clone())))
}

/// # Safety
/// `perm` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn ppm_longest_decreasing(perm: *const PpmPerm) -> usize {
    perm.as_ref().map_or(0, |p| longest_decreasing_length(&p.0))
}

/// Whether the permutation is skew-merged and avoids 3142.
///
/// # Safety
/// `perm` must be a live handle or null (which yields false).
#[no_mangle]
pub unsafe extern "C" fn ppm_in_skew_star(perm: *const PpmPerm) -> bool {
    perm.as_ref().is_some_and(|p| in_skew_star(&p.0))
}

/// Complexity of matching patterns from the class avoiding `rho`.
///
/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ppm_classify(rho: *const PpmPerm, out: *mut PpmComplexity) -> PpmStatus {
    guard(|| {
        let r = perm_ref(rho, "rho")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = match classify_principal(r).map_err(fail)? {
            Complexity::Polynomial => PpmComplexity::Polynomial,
            Complexity::NpComplete => PpmComplexity::NpComplete,
        };
        Ok(PpmStatus::Ok)
    })
}

/// Builds the reduction of a DIMACS 3-CNF formula, twirled if `twirl`.
///
/// # Safety
/// `dimacs` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ppm_reduction_from_dimacs(
    dimacs: *const c_char,
    twirl: bool,
    out: *mut *mut PpmReduction,
) -> PpmStatus {
    guard(|| {
        let formula = parse_dimacs(c_str(dimacs, "dimacs")?).map_err(fail)?;
        let instance = build_instance(&formula).map_err(fail)?;
        let (pattern, text) = if twirl {
            let tw = twirl_instance(instance.clone()).map_err(fail)?;
            (tw.pattern().clone(), tw.text().clone())
        } else {
            (instance.pattern().clone(), instance.text().clone())
        };
        put(
            out,
            PpmReduction {
                formula,
                instance,
                pattern: PpmPerm(pattern),
                text: PpmPerm(text),
            },
        )
    })
}

/// Borrowed pattern handle, valid while `red` lives. Do not free it.
///
/// # Safety
/// `red` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ppm_reduction_pattern(red: *const PpmReduction) -> *const PpmPerm {
    red.as_ref().map_or(ptr::null(), |r| &r.pattern)
}

/// Borrowed text handle, valid while `red` lives. Do not free it.
///
/// # Safety
/// `red` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ppm_reduction_text(red: *const PpmReduction) -> *const PpmPerm {
    red.as_ref().map_or(ptr::null(), |r| &r.text)
}

/// Decides the formula through the reduction. Returns `Ok` if satisfiable,
/// writing the satisfying assignment to `assignment` when non-null
/// (`cap` must cover the variable count), and `No` otherwise.
///
/// # Safety
/// `red` must be a live handle; `assignment` must be null or have room for
/// `cap` elements.
#[no_mangle]
pub unsafe extern "C" fn ppm_reduction_decide(
    red: *const PpmReduction,
    assignment: *mut bool,
    cap: usize,
) -> PpmStatus {
    guard(|| {
        let r = red.as_ref().ok_or_else(|| null("reduction"))?;
        let vars = r.formula.num_vars();
        if !assignment.is_null() && cap < vars {
            return Err((PpmStatus::BufferTooSmall, format!("need {vars} entries, got {cap}")));
        }
        match r.instance.decide_via_assignments().map_err(fail)? {
            Decision::Satisfiable(phi, _) => {
                if !assignment.is_null() {
                    for i in 0..vars {
                        *assignment.add(i) = phi.value(i + 1);
                    }
                }
                Ok(PpmStatus::Ok)
            }
            Decision::Unsatisfiable => Ok(PpmStatus::No),
        }
    })
}

/// # Safety
/// `red` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ppm_reduction_free(red: *mut PpmReduction) {
    if !red.is_null() {
        drop(Box::from_raw(red));
    }
}
