//! C ABI over the `kkp` library.
//!
//! Instances and reports are opaque heap handles released with their
//! `_free` function. Every fallible call returns a [`KkpStatus`]; the message
//! of the last failure on the calling thread is available from
//! [`kkp_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kkp::growth::count_lattice;
use kkp::io::parse_auto;
use kkp::workbench::{solve, Algorithm};
use kkp::{Epsilon, Error, Instance, SolveReport};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KkpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    InvalidInstance = 4,
    NoPackableItems = 5,
    LimitExceeded = 6,
    Overflow = 7,
    Internal = 8,
}

/// Solver selector for [`kkp_solve`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KkpAlgorithm {
    ExactEnum = 0,
    ExactDp = 1,
    Exact = 2,
    Half = 3,
    Ptas = 4,
    Fptas = 5,
}

impl From<KkpAlgorithm> for Algorithm {
    fn from(a: KkpAlgorithm) -> Self {
        match a {
            KkpAlgorithm::ExactEnum => Algorithm::ExactEnum,
            KkpAlgorithm::ExactDp => Algorithm::ExactDp,
            KkpAlgorithm::Exact => Algorithm::Exact,
            KkpAlgorithm::Half => Algorithm::Half,
            KkpAlgorithm::Ptas => Algorithm::Ptas,
            KkpAlgorithm::Fptas => Algorithm::Fptas,
        }
    }
}

/// Opaque instance handle.
pub struct KkpInstance(Instance);

/// Opaque solve report handle.
pub struct KkpReport(SolveReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> KkpStatus {
    match e {
        Error::Parse(_) => KkpStatus::ParseError,
        Error::InvalidInstance(_) | Error::UnknownItem(_) => KkpStatus::InvalidInstance,
        Error::NoPackableItems => KkpStatus::NoPackableItems,
        Error::EnumerationTooLarge(_)
        | Error::DpBudgetExceeded { .. }
        | Error::CeilingExceeded { .. } => KkpStatus::LimitExceeded,
        Error::Overflow(_) => KkpStatus::Overflow,
        Error::Internal(_) => KkpStatus::Internal,
        _ => KkpStatus::InvalidArgument,
    }
}

fn fail(status: KkpStatus, msg: impl Into<String>) -> KkpStatus {
    set_error(msg.into());
    status
}

/// Runs `body`, mapping library errors and panics to a status.
fn guard<F>(body: F) -> KkpStatus
where
    F: FnOnce() -> Result<(), KkpStatus>,
{
    set_error(String::new());
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => KkpStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(KkpStatus::Internal, "panic inside kkp"),
    }
}

fn lib<T>(r: kkp::Result<T>) -> Result<T, KkpStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), KkpStatus> {
    if p.is_null() {
        Err(fail(KkpStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

/// Message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn kkp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds an instance from `n` profit and weight pairs.
///
/// # Safety
/// `profits` and `weights` must point to `n` readable values (or be null when
/// `n` is 0) and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kkp_instance_new(
    profits: *const u64,
    weights: *const u64,
    n: usize,
    capacity: u64,
    k: usize,
    out: *mut *mut KkpInstance,
) -> KkpStatus {
    guard(|| {
        non_null(out, "out")?;
        let pairs: Vec<(u64, u64)> = if n == 0 {
            Vec::new()
        } else {
            non_null(profits, "profits")?;
            non_null(weights, "weights")?;
            let p = std::slice::from_raw_parts(profits, n);
            let w = std::slice::from_raw_parts(weights, n);
            p.iter().copied().zip(w.iter().copied()).collect()
        };
        let inst = lib(Instance::from_pairs(&pairs, capacity, k))?;
        *out = Box::into_raw(Box::new(KkpInstance(inst)));
        Ok(())
    })
}

/// Parses an instance in the text or JSON format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kkp_instance_parse(
    text: *const c_char,
    out: *mut *mut KkpInstance,
) -> KkpStatus {
    guard(|| {
        non_null(text, "text")?;
        non_null(out, "out")?;
        let src = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| fail(KkpStatus::ParseError, "input is not UTF-8"))?;
        let inst = lib(parse_auto(src))?;
        *out = Box::into_raw(Box::new(KkpInstance(inst)));
        Ok(())
    })
}

/// Number of items in the instance; 0 for null.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kkp_instance_len(inst: *const KkpInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.len())
}

/// Releases an instance. Null is ignored.
///
/// # Safety
/// `inst` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kkp_instance_free(inst: *mut KkpInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Solves `inst`. The approximation schemes read ε as `eps_num/eps_den`;
/// the other algorithms ignore it (pass 0/0).
///
/// # Safety
/// `inst` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kkp_solve(
    inst: *const KkpInstance,
    alg: KkpAlgorithm,
    eps_num: u64,
    eps_den: u64,
    out: *mut *mut KkpReport,
) -> KkpStatus {
    guard(|| {
        non_null(inst, "inst")?;
        non_null(out, "out")?;
        let alg = Algorithm::from(alg);
        let eps = if alg.needs_epsilon() {
            Some(lib(Epsilon::new(eps_num, eps_den))?)
        } else {
            None
        };
        let report = lib(solve(&(*inst).0, alg, eps))?;
        *out = Box::into_raw(Box::new(KkpReport(report)));
        Ok(())
    })
}

/// Objective value of the returned solution; 0 for null.
///
/// # Safety
/// `rep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kkp_report_value(rep: *const KkpReport) -> u64 {
    rep.as_ref().map_or(0, |r| r.0.value)
}

/// Total weight of the returned solution; 0 for null.
///
/// # Safety
/// `rep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kkp_report_weight(rep: *const KkpReport) -> u64 {
    rep.as_ref().map_or(0, |r| r.0.weight)
}

/// Whether the solution was verified feasible against the input.
///
/// # Safety
/// `rep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kkp_report_feasible(rep: *const KkpReport) -> bool {
    rep.as_ref().is_some_and(|r| r.0.feasible)
}

/// Number of selected items; 0 for null.
///
/// # Safety
/// `rep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kkp_report_len(rep: *const KkpReport) -> usize {
    rep.as_ref().map_or(0, |r| r.0.item_ids.len())
}

/// Copies the selected item ids (ascending) into `buf`, which holds `cap`
/// entries. Fails with `KKP_STATUS_INVALID_ARGUMENT` when `cap` is too small.
///
/// # Safety
/// `rep` must be a live handle and `buf` must hold `cap` writable entries.
#[no_mangle]
pub unsafe extern "C" fn kkp_report_items(
    rep: *const KkpReport,
    buf: *mut usize,
    cap: usize,
) -> KkpStatus {
    guard(|| {
        non_null(rep, "rep")?;
        let ids = &(*rep).0.item_ids;
        if ids.is_empty() {
            return Ok(());
        }
        non_null(buf, "buf")?;
        if cap < ids.len() {
            return Err(fail(
                KkpStatus::InvalidArgument,
                format!("buffer holds {cap} ids, report has {}", ids.len()),
            ));
        }
        ptr::copy_nonoverlapping(ids.as_ptr(), buf, ids.len());
        Ok(())
    })
}

/// Releases a report. Null is ignored.
///
/// # Safety
/// `rep` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kkp_report_free(rep: *mut KkpReport) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// Counts lattice points of the growth construction for ε = `eps_num/eps_den`
/// in dimension `dim`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kkp_count_lattice(
    eps_num: u64,
    eps_den: u64,
    dim: usize,
    out: *mut u64,
) -> KkpStatus {
    guard(|| {
        non_null(out, "out")?;
        let eps = lib(Epsilon::new(eps_num, eps_den))?;
        *out = lib(count_lattice(eps, dim))?.lattice_count;
        Ok(())
    })
}
