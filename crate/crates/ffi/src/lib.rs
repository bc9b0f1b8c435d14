//! C interface to tropicount.
//!
//! Problems and results are opaque handles. Functions return a [`TcStatus`];
//! on failure [`tc_last_error`] describes the problem. Strings handed out by
//! the library must be released with [`tc_string_free`].

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tropicount::cli::{cmd_check2d, cmd_decompose, cmd_oracle, CliError, Overrides};
use tropicount::count::{count_tropical, CountError, CountResult};
use tropicount::io::{count_result_json, ProblemJson};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcStatus {
    Ok = 0,
    /// Malformed input or a validation failure.
    InvalidInput = 1,
    /// Constraints stayed special after every resampling attempt.
    NonGeneric = 2,
    /// A consistency check reported a mismatch.
    Mismatch = 3,
    NullPointer = 4,
    /// The library panicked; the message is in [`tc_last_error`].
    Internal = 5,
}

/// A parsed problem file plus parameter and option overrides.
pub struct TcProblem {
    json: ProblemJson,
    overrides: Overrides,
}

/// The result of [`tc_count`].
pub struct TcCountResult {
    result: CountResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &CliError) -> TcStatus {
    match e.exit_code() {
        2 => TcStatus::NonGeneric,
        _ => TcStatus::InvalidInput,
    }
}

/// Runs `f`, turning panics into `Internal`.
fn guard(f: impl FnOnce() -> TcStatus) -> TcStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(msg);
            TcStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, TcStatus> {
    if s.is_null() {
        set_error("null pointer");
        return Err(TcStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("input is not valid UTF-8");
        TcStatus::InvalidInput
    })
}

fn give_string(s: String, out: *mut *mut c_char) -> TcStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            TcStatus::Ok
        }
        Err(_) => {
            set_error("output contains a NUL byte");
            TcStatus::Internal
        }
    }
}

/// Message of the last failure on this thread, or NULL. The pointer stays
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn tc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a problem file.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_problem_from_json(json: *const c_char, out: *mut *mut TcProblem) -> TcStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return TcStatus::NullPointer;
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match ProblemJson::parse(text) {
            Ok(json) => {
                *out = Box::into_raw(Box::new(TcProblem {
                    json,
                    overrides: Overrides::default(),
                }));
                TcStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                TcStatus::InvalidInput
            }
        }
    })
}

/// # Safety
/// `p` must be NULL or a handle from [`tc_problem_from_json`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tc_problem_free(p: *mut TcProblem) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Sets a named integer parameter used by the constraint directions.
///
/// # Safety
/// `p` must be a live problem handle and `name` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn tc_problem_set_param(p: *mut TcProblem, name: *const c_char, value: i64) -> TcStatus {
    guard(|| {
        let Some(p) = p.as_mut() else {
            set_error("null problem");
            return TcStatus::NullPointer;
        };
        match read_str(name) {
            Ok(n) => {
                p.overrides.params.insert(n.to_string(), value);
                TcStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Overrides seed, resampling and thread count. `threads = 0` uses all cores.
///
/// # Safety
/// `p` must be a live problem handle.
#[no_mangle]
pub unsafe extern "C" fn tc_problem_set_options(
    p: *mut TcProblem,
    seed: u64,
    allow_resample: bool,
    threads: usize,
) -> TcStatus {
    guard(|| {
        let Some(p) = p.as_mut() else {
            set_error("null problem");
            return TcStatus::NullPointer;
        };
        p.overrides.seed = Some(seed);
        p.overrides.no_resample = !allow_resample;
        p.overrides.threads = Some(threads);
        TcStatus::Ok
    })
}

/// Counts the curves of a problem.
///
/// # Safety
/// `p` must be a live problem handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_count(p: *const TcProblem, out: *mut *mut TcCountResult) -> TcStatus {
    guard(|| {
        let (Some(p), false) = (p.as_ref(), out.is_null()) else {
            set_error("null pointer");
            return TcStatus::NullPointer;
        };
        let params: BTreeMap<String, i64> = p.overrides.params.clone();
        let mut prob = match p.json.resolve(&params) {
            Ok(x) => x,
            Err(e) => {
                set_error(e.to_string());
                return TcStatus::InvalidInput;
            }
        };
        p.overrides.apply(&mut prob.options);
        match count_tropical(&prob.degree, &prob.constraints, &prob.options) {
            Ok(result) => {
                *out = Box::into_raw(Box::new(TcCountResult { result }));
                TcStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                if matches!(e, CountError::NonGenericConstraints { .. }) {
                    TcStatus::NonGeneric
                } else {
                    TcStatus::InvalidInput
                }
            }
        }
    })
}

/// # Safety
/// `r` must be NULL or a handle from [`tc_count`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tc_result_free(r: *mut TcCountResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of curves found, or 0 for NULL.
///
/// # Safety
/// `r` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn tc_result_num_curves(r: *const TcCountResult) -> usize {
    r.as_ref().map_or(0, |r| r.result.curves.len())
}

/// The weighted total as a decimal string.
///
/// # Safety
/// `r` must be a live result handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_result_total(r: *const TcCountResult, out: *mut *mut c_char) -> TcStatus {
    guard(|| match (r.as_ref(), out.is_null()) {
        (Some(r), false) => give_string(r.result.total.to_string(), out),
        _ => {
            set_error("null pointer");
            TcStatus::NullPointer
        }
    })
}

/// The full result as JSON.
///
/// # Safety
/// `r` must be a live result handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_result_to_json(r: *const TcCountResult, out: *mut *mut c_char) -> TcStatus {
    guard(|| match (r.as_ref(), out.is_null()) {
        (Some(r), false) => give_string(count_result_json(&r.result).to_string(), out),
        _ => {
            set_error("null pointer");
            TcStatus::NullPointer
        }
    })
}

/// Plane identity check for every curve of a plane problem, as JSON.
/// Returns `Mismatch` (with the table still written) if any row differs.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_check2d_json(json: *const c_char, out: *mut *mut c_char) -> TcStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return TcStatus::NullPointer;
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match cmd_check2d(text, &Overrides::default()) {
            Ok((v, ok)) => {
                let s = give_string(v.to_string(), out);
                if s == TcStatus::Ok && !ok {
                    set_error("some rows do not agree");
                    return TcStatus::Mismatch;
                }
                s
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Adapted decomposition for curves and a fan, as JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_decompose_json(json: *const c_char, out: *mut *mut c_char) -> TcStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return TcStatus::NullPointer;
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match cmd_decompose(text, &Overrides::default()) {
            Ok(v) => give_string(v.to_string(), out),
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Plane curve numbers N_1..N_dmax as a JSON array of integers.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_oracle_json(dmax: usize, out: *mut *mut c_char) -> TcStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return TcStatus::NullPointer;
        }
        match cmd_oracle(dmax) {
            Ok(v) => give_string(v.to_string(), out),
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}
