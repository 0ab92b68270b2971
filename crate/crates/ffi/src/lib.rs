//! C ABI over `superq`.
//!
//! Objects cross the boundary as opaque handles created by `*_from_json` or
//! by an operation and released with the matching `*_free`. Every call
//! returns a status code: `SQ_OK`, a positive library error code, or a
//! negative code for boundary failures. The message of the last failure on
//! the calling thread is available from `sq_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use superq::entangle::{self, TwoPartyTable};
use superq::{io, superstate, Error, GrassmannElement, SuperKet, SuperMatrix};

pub const SQ_OK: i32 = 0;
pub const SQ_ERR_NULL: i32 = -1;
pub const SQ_ERR_UTF8: i32 = -2;
pub const SQ_ERR_PANIC: i32 = -3;

pub struct SqElement(GrassmannElement);
pub struct SqMatrix(SuperMatrix);
pub struct SqKet(SuperKet);
pub struct SqTable(TwoPartyTable);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

enum Fail {
    Null,
    Utf8,
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last("");
            SQ_OK
        }
        Ok(Err(Fail::Null)) => {
            set_last("null pointer argument");
            SQ_ERR_NULL
        }
        Ok(Err(Fail::Utf8)) => {
            set_last("input is not valid UTF-8");
            SQ_ERR_UTF8
        }
        Ok(Err(Fail::Lib(e))) => {
            set_last(&format!("{}: {e}", e.name()));
            e.code()
        }
        Err(_) => {
            set_last("internal panic");
            SQ_ERR_PANIC
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail::Null);
    }
    CStr::from_ptr(s).to_str().map_err(|_| Fail::Utf8)
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null)
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    *out = CString::new(s).map_err(|_| Fail::Utf8)?.into_raw();
    Ok(())
}

unsafe fn release<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message of the last failed call on this thread, empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn sq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Stable identifier for a status code, or `"unknown"`.
#[no_mangle]
pub extern "C" fn sq_error_name(code: i32) -> *const c_char {
    let name: &'static CStr = match code {
        SQ_OK => c"ok",
        SQ_ERR_NULL => c"null-pointer",
        SQ_ERR_UTF8 => c"invalid-utf8",
        SQ_ERR_PANIC => c"panic",
        1 => c"format-mismatch",
        2 => c"generator-out-of-range",
        3 => c"inhomogeneous",
        4 => c"parity-violation",
        5 => c"noninvertible",
        6 => c"unsupported-convention",
        7 => c"size-bound",
        8 => c"numeric",
        9 => c"not-normalized",
        10 => c"zero-state",
        11 => c"undefined-tangle",
        12 => c"wrong-dimension",
        13 => c"parity-mismatch",
        14 => c"calibration-failed",
        15 => c"uncalibrated-arrangement",
        16 => c"parse",
        _ => c"unknown",
    };
    name.as_ptr()
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sq_element_from_json(json: *const c_char, out: *mut *mut SqElement) -> i32 {
    guard(|| {
        let e = io::element_from_file(&io::parse(text(json)?)?)?;
        put(out, SqElement(e))
    })
}

/// Canonical JSON text; release it with `sq_string_free`.
///
/// # Safety
/// `e` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sq_element_to_json(e: *const SqElement, out: *mut *mut c_char) -> i32 {
    guard(|| put_string(out, io::to_canonical(&io::element_to_file(&get(e)?.0))))
}

/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sq_element_mul(a: *const SqElement, b: *const SqElement, out: *mut *mut SqElement) -> i32 {
    guard(|| {
        let p = get(a)?.0.try_mul(&get(b)?.0)?;
        put(out, SqElement(p))
    })
}

/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sq_element_add(a: *const SqElement, b: *const SqElement, out: *mut *mut SqElement) -> i32 {
    guard(|| {
        let s = get(a)?.0.try_add(&get(b)?.0)?;
        put(out, SqElement(s))
    })
}

/// Writes 0 or 1 to `out`, or fails with `inhomogeneous`.
///
/// # Safety
/// `e` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sq_element_parity(e: *const SqElement, out: *mut u8) -> i32 {
    guard(|| {
        let p = get(e)?.0.parity()?;
        if out.is_null() {
            return Err(Fail::Null);
        }
        *out = p.bit();
        Ok(())
    })
}

/// Real and imaginary part of the body.
///
/// # Safety
/// `e` must be a live handle; `re` and `im` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sq_element_body(e: *const SqElement, re: *mut f64, im: *mut f64) -> i32 {
    guard(|| {
        let b = get(e)?.0.body();
        if re.is_null() || im.is_null() {
            return Err(Fail::Null);
        }
        *re = b.re;
        *im = b.im;
        Ok(())
    })
}

/// # Safety
/// `e` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sq_element_free(e: *mut SqElement) {
    release(e)
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sq_matrix_from_json(json: *const c_char, out: *mut *mut SqMatrix) -> i32 {
    guard(|| {
        let m = io::matrix_from_file(&io::parse(text(json)?)?)?;
        put(out, SqMatrix(m))
    })
}

/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sq_matrix_to_json(m: *const SqMatrix, out: *mut *mut c_char) -> i32 {
    guard(|| put_string(out, io::to_canonical(&io::matrix_to_file(&get(m)?.0))))
}

/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sq_matrix_mul(a: *const SqMatrix, b: *const SqMatrix, out: *mut *mut SqMatrix) -> i32 {
    guard(|| {
        let p = get(a)?.0.try_mul(&get(b)?.0)?;
        put(out, SqMatrix(p))
    })
}

/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sq_matrix_supertranspose(m: *const SqMatrix, out: *mut *mut SqMatrix) -> i32 {
    guard(|| {
        let t = get(m)?.0.supertranspose()?;
        put(out, SqMatrix(t))
    })
}

/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sq_matrix_supertrace(m: *const SqMatrix, out: *mut *mut SqElement) -> i32 {
    guard(|| {
        let s = get(m)?.0.supertrace()?;
        put(out, SqElement(s))
    })
}

/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sq_matrix_berezinian(m: *const SqMatrix, out: *mut *mut SqElement) -> i32 {
    guard(|| {
        let b = get(m)?.0.berezinian()?;
        put(out, SqElement(b))
    })
}

/// # Safety
/// `m` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sq_matrix_free(m: *mut SqMatrix) {
    release(m)
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sq_ket_from_json(json: *const c_char, out: *mut *mut SqKet) -> i32 {
    guard(|| {
        let k = io::state_from_file(&io::parse(text(json)?)?)?;
        put(out, SqKet(k))
    })
}

/// `<phi||psi>`.
///
/// # Safety
/// `phi`, `psi` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sq_ket_inner(phi: *const SqKet, psi: *const SqKet, out: *mut *mut SqElement) -> i32 {
    guard(|| {
        let v = superstate::inner(&get(phi)?.0, &get(psi)?.0)?;
        put(out, SqElement(v))
    })
}

/// # Safety
/// `k` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sq_ket_free(k: *mut SqKet) {
    release(k)
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sq_table_from_json(json: *const c_char, out: *mut *mut SqTable) -> i32 {
    guard(|| {
        let t = io::table_from_file(&io::parse(text(json)?)?)?;
        put(out, SqTable(t))
    })
}

/// # Safety
/// `t` must be a live qubit-table handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sq_table_concurrence(t: *const SqTable, force_unnormalized: bool, out: *mut f64) -> i32 {
    guard(|| {
        let c = entangle::concurrence(&get(t)?.0, force_unnormalized)?;
        if out.is_null() {
            return Err(Fail::Null);
        }
        *out = c;
        Ok(())
    })
}

/// # Safety
/// `t` must be a live super-table handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sq_table_superconcurrence(t: *const SqTable, out: *mut f64) -> i32 {
    guard(|| {
        let t = &get(t)?.0;
        let c = entangle::superconcurrence(t, t.kind().parity())?;
        if out.is_null() {
            return Err(Fail::Null);
        }
        *out = c;
        Ok(())
    })
}

/// # Safety
/// `t` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sq_table_free(t: *mut SqTable) {
    release(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_match_library() {
        use superq::Parity;
        let s = String::new;
        let errors = [
            Error::FormatMismatch(s()),
            Error::GeneratorOutOfRange { index: 0, n: 0 },
            Error::Inhomogeneous,
            Error::ParityViolation(s()),
            Error::Noninvertible(s()),
            Error::UnsupportedConvention(0),
            Error::SizeBound { size: 0, bound: 0 },
            Error::Numeric(s()),
            Error::NotNormalized { deviation: 0.0, tolerance: 0.0 },
            Error::ZeroState,
            Error::UndefinedTangle { factor: s(), rhs: s() },
            Error::Dimension { expected: 0, got: 0 },
            Error::ParityMismatch { expected: Parity::Even, got: Parity::Odd },
            Error::Calibration(s()),
            Error::UnknownArrangement(s()),
            Error::Parse(s()),
        ];
        for e in errors {
            let name = unsafe { CStr::from_ptr(sq_error_name(e.code())) };
            assert_eq!(name.to_str().unwrap(), e.name());
        }
    }
}
