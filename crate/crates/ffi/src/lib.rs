//! C interface to abelkit.
//!
//! Groups are opaque handles. Every fallible call returns an
//! [`AbelkitStatus`]; on failure [`abelkit_last_error`] describes it.
//! Strings returned through out-parameters are owned by the caller and must
//! be released with [`abelkit_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use abelkit::classify::classify;
use abelkit::options::DEFAULT_HOM_BUDGET;
use abelkit::rickart::{decide, Property};
use abelkit::{direct_sum, Error, FgAbGroup, Options};

/// Result of an FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbelkitStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    UnknownProperty = 4,
    InfiniteHomSet = 5,
    BudgetExceeded = 6,
    TooLarge = 7,
    InfiniteGroup = 8,
    InvalidArgument = 9,
    /// The value does not fit the output type.
    Overflow = 10,
    Internal = 11,
}

/// An immutable finitely generated abelian group.
pub struct AbelkitGroup(FgAbGroup);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> AbelkitStatus {
    match e {
        Error::Parse { .. } => AbelkitStatus::ParseError,
        Error::UnknownProperty(_) => AbelkitStatus::UnknownProperty,
        Error::InfiniteHomSet { .. } => AbelkitStatus::InfiniteHomSet,
        Error::BudgetExceeded { .. } => AbelkitStatus::BudgetExceeded,
        Error::TooLarge(_) => AbelkitStatus::TooLarge,
        Error::InfiniteGroup(_) => AbelkitStatus::InfiniteGroup,
        Error::Inconsistent(_) => AbelkitStatus::Internal,
        _ => AbelkitStatus::InvalidArgument,
    }
}

struct Failure(AbelkitStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `f`, recording any error or panic for [`abelkit_last_error`].
fn guarded(f: impl FnOnce() -> Result<(), Failure>) -> AbelkitStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AbelkitStatus::Ok,
        Ok(Err(Failure(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            AbelkitStatus::Internal
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(AbelkitStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(AbelkitStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `p` is null or a handle from this library that has not been freed.
unsafe fn read_group<'a>(p: *const AbelkitGroup, what: &str) -> Result<&'a FgAbGroup, Failure> {
    p.as_ref().map(|g| &g.0).ok_or_else(|| null(what))
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(AbelkitStatus::Internal, "string contains NUL".into()))
}

fn put<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    // SAFETY: checked non-null; the caller provides writable storage.
    unsafe { out.write(v) };
    Ok(())
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn abelkit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn abelkit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses an expression such as `Z + Z/2 + Z/6`.
///
/// # Safety
/// `expr` is a NUL-terminated string and `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn abelkit_group_parse(
    expr: *const c_char,
    out: *mut *mut AbelkitGroup,
) -> AbelkitStatus {
    guarded(|| {
        let g: FgAbGroup = read_str(expr, "expr")?.parse()?;
        put(out, Box::into_raw(Box::new(AbelkitGroup(g))))
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `g` is null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn abelkit_group_free(g: *mut AbelkitGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Order of a finite group.
///
/// # Safety
/// `g` is a live handle and `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn abelkit_group_order(
    g: *const AbelkitGroup,
    out: *mut u64,
) -> AbelkitStatus {
    guarded(|| {
        let g = read_group(g, "group")?;
        if !g.is_finite() {
            return Err(Error::InfiniteGroup(g.to_string()).into());
        }
        let n = g
            .order_u64()
            .ok_or_else(|| Failure(AbelkitStatus::Overflow, format!("order of {g} exceeds 64 bits")))?;
        put(out, n)
    })
}

/// Canonical text form, e.g. `Z + Z/2 + Z/6`.
///
/// # Safety
/// `g` is a live handle and `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn abelkit_group_format(
    g: *const AbelkitGroup,
    out: *mut *mut c_char,
) -> AbelkitStatus {
    guarded(|| {
        let g = read_group(g, "group")?;
        put(out, into_c_string(g.to_string())?)
    })
}

/// `a + b` as a new handle.
///
/// # Safety
/// `a` and `b` are live handles and `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn abelkit_group_direct_sum(
    a: *const AbelkitGroup,
    b: *const AbelkitGroup,
    out: *mut *mut AbelkitGroup,
) -> AbelkitStatus {
    guarded(|| {
        let s = direct_sum(read_group(a, "a")?, read_group(b, "b")?);
        put(out, Box::into_raw(Box::new(AbelkitGroup(s))))
    })
}

/// Decides `property` (e.g. `strongly-rickart`) for `m`, or for the pair
/// `(m, n)` when `n` is non-null. A `budget` of 0 selects the default. The
/// report, including any witness, is written to `json_out`.
///
/// # Safety
/// `property` is a NUL-terminated string, `m` a live handle, `n` null or a
/// live handle, and `json_out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn abelkit_decide(
    property: *const c_char,
    m: *const AbelkitGroup,
    n: *const AbelkitGroup,
    budget: u64,
    json_out: *mut *mut c_char,
) -> AbelkitStatus {
    guarded(|| {
        let p: Property = read_str(property, "property")?.parse()?;
        let m = read_group(m, "m")?;
        let n = if n.is_null() { None } else { Some(read_group(n, "n")?) };
        let budget = if budget == 0 { DEFAULT_HOM_BUDGET } else { budget };
        let r = decide(p, m, n, &Options::with_budget(budget))?;
        let json = serde_json::to_string(&r).map_err(|e| Failure(AbelkitStatus::Internal, e.to_string()))?;
        put(json_out, into_c_string(json)?)
    })
}

/// Closed-form classification verdict as JSON.
///
/// # Safety
/// `g` is a live handle and `json_out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn abelkit_classify(
    g: *const AbelkitGroup,
    json_out: *mut *mut c_char,
) -> AbelkitStatus {
    guarded(|| {
        let v = classify(read_group(g, "group")?);
        let json = serde_json::to_string(&v).map_err(|e| Failure(AbelkitStatus::Internal, e.to_string()))?;
        put(json_out, into_c_string(json)?)
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` is null or a string from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn abelkit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
