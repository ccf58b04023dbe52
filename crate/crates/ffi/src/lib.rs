//! C ABI over `pifinite`.
//!
//! Spaces are passed as opaque `PifSpace` handles. Every fallible call returns
//! a `PifStatus`; on failure a message is available from
//! `pif_last_error_message` on the same thread. Strings returned through out
//! parameters are owned by the caller and released with `pif_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pifinite::{beta_element, delta_iter, parse_space, Error, ExactRational, Prime, SpaceExpr};

/// Status codes; the numeric values match the CLI exit codes where they overlap.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PifStatus {
    Ok = 0,
    InputError = 1,
    ResourceError = 2,
    NullPointer = 3,
    Panic = 4,
}

/// Opaque handle to a parsed space.
pub struct PifSpace {
    inner: SpaceExpr,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(err: Error) -> PifStatus {
    let status = if err.is_resource() { PifStatus::ResourceError } else { PifStatus::InputError };
    set_error(err.to_string());
    status
}

fn guard(f: impl FnOnce() -> PifStatus) -> PifStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            PifStatus::Panic
        }
    }
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s).expect("no interior NUL").into_raw()
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, PifStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(PifStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        PifStatus::InputError
    })
}

fn prime(p: u64) -> Result<Prime, PifStatus> {
    Prime::new(p).map_err(fail)
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

macro_rules! non_null {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            set_error("null pointer argument");
            return PifStatus::NullPointer;
        }
    };
}

/// Parse an expression such as `B(S3) + pt`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pif_space_parse(text: *const c_char, out: *mut *mut PifSpace) -> PifStatus {
    guard(|| {
        non_null!(out);
        let text = try_status!(read_str(text));
        match parse_space(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(PifSpace { inner }));
                PifStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `space` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pif_space_free(space: *mut PifSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// # Safety
/// `space` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pif_space_to_string(space: *const PifSpace, out: *mut *mut c_char) -> PifStatus {
    guard(|| {
        non_null!(space, out);
        *out = to_c((*space).inner.to_string());
        PifStatus::Ok
    })
}

/// `|X|_n` at `p` as a reduced fraction of decimal strings; `n = 0` gives the
/// homotopy cardinality.
///
/// # Safety
/// `space` must be a live handle; `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pif_space_height_cardinality(
    space: *const PifSpace,
    p: u64,
    n: u32,
    num: *mut *mut c_char,
    den: *mut *mut c_char,
) -> PifStatus {
    guard(|| {
        non_null!(space, num, den);
        let p = try_status!(prime(p));
        let v = (*space).inner.height_cardinality(p, n);
        *num = to_c(v.numer().to_string());
        *den = to_c(v.denom().to_string());
        PifStatus::Ok
    })
}

/// The p-adic free loop space as a new handle.
///
/// # Safety
/// `space` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pif_space_loop(space: *const PifSpace, p: u64, out: *mut *mut PifSpace) -> PifStatus {
    guard(|| {
        non_null!(space, out);
        let p = try_status!(prime(p));
        let inner = (*space).inner.p_adic_loop(p);
        *out = Box::into_raw(Box::new(PifSpace { inner }));
        PifStatus::Ok
    })
}

/// Whether `|X|_n` is a p-adic unit; requires `n >= 1`.
///
/// # Safety
/// `space` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pif_space_is_amenable(space: *const PifSpace, p: u64, n: u32, out: *mut bool) -> PifStatus {
    guard(|| {
        non_null!(space, out);
        let p = try_status!(prime(p));
        match (*space).inner.is_amenable_at_height(p, n) {
            Ok(b) => {
                *out = b;
                PifStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// `δ^k(a)` for a rational `a` written as `"num"` or `"num/den"`.
///
/// # Safety
/// `value` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pif_delta(value: *const c_char, p: u64, k: u32, out: *mut *mut c_char) -> PifStatus {
    guard(|| {
        non_null!(out);
        let text = try_status!(read_str(value));
        let p = try_status!(prime(p));
        let a: ExactRational = match text.trim().parse() {
            Ok(a) => a,
            Err(e) => return fail(e),
        };
        match delta_iter(&a, p, k) {
            Ok(v) => {
                *out = to_c(v.to_string());
                PifStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// The value of the splitting element `β_(k)` at height `n`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pif_beta_value(p: u64, k: u32, n: u32, out: *mut *mut c_char) -> PifStatus {
    guard(|| {
        non_null!(out);
        let p = try_status!(prime(p));
        let value = beta_element(p, k).and_then(|b| b.element.evaluate(p, n));
        match value {
            Ok(v) => {
                *out = to_c(v.to_string());
                PifStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pif_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn pif_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
