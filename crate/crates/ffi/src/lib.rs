//! C interface to `mmdescend`.
//!
//! Schemes and descent outcomes are opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns an
//! [`MmdStatus`]; on failure [`mmd_last_error_message`] describes the problem.
//! Strings returned through `char **` are owned by the caller and released
//! with [`mmd_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mmdescend::obstruct::integer_obstruction;
use mmdescend::rationalize::{descend, DescentOutcome, DescentStatus, SearchBounds};
use mmdescend::scheme::SchemeDocument;
use mmdescend::{Error, Scheme, Variant};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MmdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    BrentViolation = 4,
    NotRational = 5,
    NoObstruction = 6,
    NoResult = 7,
    Io = 8,
    Internal = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MmdDescentStatus {
    Success = 0,
    NoSolution = 1,
    Inconclusive = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MmdVariant {
    Opq = 0,
    Pqo = 1,
    Qop = 2,
}

/// Opaque scheme handle.
pub struct MmdScheme {
    inner: Scheme,
}

/// Opaque descent result handle.
pub struct MmdOutcome {
    inner: DescentOutcome,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> MmdStatus {
    match e {
        Error::BrentViolation(_) => MmdStatus::BrentViolation,
        Error::NotRational => MmdStatus::NotRational,
        Error::Io(_) => MmdStatus::Io,
        Error::Internal(_) => MmdStatus::Internal,
        _ => MmdStatus::Parse,
    }
}

/// Runs `f`, recording errors and converting panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<MmdStatus, (MmdStatus, String)>) -> MmdStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            MmdStatus::Internal
        }
    }
}

fn fail(e: Error) -> (MmdStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (MmdStatus, String) {
    (MmdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (MmdStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (MmdStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (MmdStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| (MmdStatus::Internal, "nul in output".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn scheme_ref<'a>(s: *const MmdScheme) -> Result<&'a Scheme, (MmdStatus, String)> {
    s.as_ref().map(|s| &s.inner).ok_or_else(|| null("scheme"))
}

unsafe fn store_scheme(out: *mut *mut MmdScheme, s: Scheme) -> Result<(), (MmdStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(MmdScheme { inner: s }));
    Ok(())
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn mmd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn mmd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a scheme document (triple or encoding form). Does not run the Brent check.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mmd_scheme_from_json(
    json: *const c_char,
    out: *mut *mut MmdScheme,
) -> MmdStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let doc = SchemeDocument::parse(text).map_err(fail)?;
        store_scheme(out, doc.scheme)?;
        Ok(MmdStatus::Ok)
    })
}

/// Loads a scheme document from a file. Does not run the Brent check.
///
/// # Safety
/// `path` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mmd_scheme_load(
    path: *const c_char,
    out: *mut *mut MmdScheme,
) -> MmdStatus {
    guard(|| {
        let p = read_str(path, "path")?;
        let doc = SchemeDocument::load(p).map_err(fail)?;
        store_scheme(out, doc.scheme)?;
        Ok(MmdStatus::Ok)
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mmd_scheme_free(s: *mut MmdScheme) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Writes `<m, n, p>` and the rank `r`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mmd_scheme_dims(
    s: *const MmdScheme,
    m: *mut usize,
    n: *mut usize,
    p: *mut usize,
    r: *mut usize,
) -> MmdStatus {
    guard(|| {
        let s = scheme_ref(s)?;
        if m.is_null() || n.is_null() || p.is_null() || r.is_null() {
            return Err(null("output pointer"));
        }
        let d = s.dims();
        *m = d.m;
        *n = d.n;
        *p = d.p;
        *r = s.rank();
        Ok(MmdStatus::Ok)
    })
}

/// `Ok` when every Brent equation holds, `BrentViolation` otherwise.
///
/// # Safety
/// `s` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn mmd_scheme_verify(s: *const MmdScheme) -> MmdStatus {
    guard(|| {
        let s = scheme_ref(s)?;
        match s.brent_verify().violation {
            None => Ok(MmdStatus::Ok),
            Some(v) => Err((MmdStatus::BrentViolation, v.to_string())),
        }
    })
}

/// Writes 1 to `out` if every entry is rational, else 0.
///
/// # Safety
/// `s` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mmd_scheme_is_rational(s: *const MmdScheme, out: *mut i32) -> MmdStatus {
    guard(|| {
        let s = scheme_ref(s)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = i32::from(s.is_rational());
        Ok(MmdStatus::Ok)
    })
}

/// Canonical triple-form JSON.
///
/// # Safety
/// `s` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mmd_scheme_to_json(
    s: *const MmdScheme,
    out: *mut *mut c_char,
) -> MmdStatus {
    guard(|| {
        let s = scheme_ref(s)?;
        write_string(out, s.to_json())?;
        Ok(MmdStatus::Ok)
    })
}

/// Runs the descent. `height` and `comb` of 0 select the defaults. The outcome
/// handle is written even when no rational scheme was found.
///
/// # Safety
/// `s` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mmd_descend(
    s: *const MmdScheme,
    height: u64,
    comb: i64,
    out: *mut *mut MmdOutcome,
) -> MmdStatus {
    guard(|| {
        let s = scheme_ref(s)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let mut bounds = SearchBounds::default();
        if height > 0 {
            bounds.height = height;
        }
        if comb > 0 {
            bounds.comb = comb;
        }
        let outcome = descend(s, &bounds).map_err(fail)?;
        *out = Box::into_raw(Box::new(MmdOutcome { inner: outcome }));
        Ok(MmdStatus::Ok)
    })
}

/// # Safety
/// `o` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn mmd_outcome_status(o: *const MmdOutcome) -> MmdDescentStatus {
    match o.as_ref().map(|o| o.inner.status) {
        Some(DescentStatus::Success) => MmdDescentStatus::Success,
        Some(DescentStatus::NoSolution) => MmdDescentStatus::NoSolution,
        _ => MmdDescentStatus::Inconclusive,
    }
}

/// JSON report with status, transform and certificate.
///
/// # Safety
/// `o` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mmd_outcome_report_json(
    o: *const MmdOutcome,
    out: *mut *mut c_char,
) -> MmdStatus {
    guard(|| {
        let o = o.as_ref().ok_or_else(|| null("outcome"))?;
        write_string(out, o.inner.report_json())?;
        Ok(MmdStatus::Ok)
    })
}

/// The rational scheme of a successful descent, as a new handle.
///
/// # Safety
/// `o` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mmd_outcome_result(
    o: *const MmdOutcome,
    out: *mut *mut MmdScheme,
) -> MmdStatus {
    guard(|| {
        let o = o.as_ref().ok_or_else(|| null("outcome"))?;
        let s = o.inner.result.clone().ok_or_else(|| {
            (
                MmdStatus::NoResult,
                format!("descent status is {}", o.inner.status.as_str()),
            )
        })?;
        store_scheme(out, s)?;
        Ok(MmdStatus::Ok)
    })
}

/// # Safety
/// `o` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mmd_outcome_free(o: *mut MmdOutcome) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// Searches products up to length `depth` for a non-integral trace. Returns
/// `Ok` with a witness, `NoObstruction` when none exists up to `depth`; the
/// JSON report is written in both cases.
///
/// # Safety
/// `s` and `report` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mmd_obstruct(
    s: *const MmdScheme,
    variant: MmdVariant,
    depth: usize,
    report: *mut *mut c_char,
) -> MmdStatus {
    guard(|| {
        let s = scheme_ref(s)?;
        let v = match variant {
            MmdVariant::Opq => Variant::Opq,
            MmdVariant::Pqo => Variant::Pqo,
            MmdVariant::Qop => Variant::Qop,
        };
        let r = integer_obstruction(s, v, depth).map_err(fail)?;
        let mut value =
            serde_json::to_value(&r).map_err(|e| (MmdStatus::Internal, e.to_string()))?;
        value["message"] = r.summary().into();
        let json = serde_json::to_string_pretty(&value)
            .map_err(|e| (MmdStatus::Internal, e.to_string()))?;
        write_string(report, json)?;
        Ok(if r.found {
            MmdStatus::Ok
        } else {
            MmdStatus::NoObstruction
        })
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mmd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
