//! C ABI over `matschroed`.
//!
//! Every fallible call returns an [`MsStatus`]; results go through out
//! pointers. Handles are opaque and owned by the caller until passed to the
//! matching `*_free`. The message of the last failure on the calling thread
//! is available from [`ms_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use matschroed::cli::{run_checks, DEFAULT_SEED};
use matschroed::expansion::{density, matrix_element};
use matschroed::families::{build_family, FamilyContext, FamilySpec, Kind, QuadOrder};
use matschroed::hermite::wave_function;
use matschroed::io::{gaussian_from_json, gaussian_to_json};
use matschroed::matpoly::MatrixGaussian;
use matschroed::{CMat, Error};

/// Status codes; zero is success.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsStatus {
    Ok = 0,
    NullPointer = 1,
    Parameter = 2,
    Domain = 3,
    Range = 4,
    Numeric = 5,
    Consistency = 6,
    Parse = 7,
    Io = 8,
    Panic = 9,
}

/// A built family: `Φ_n`, `Φ̃_n`, norms for `n ≤ n_max`.
pub struct MsFamily(FamilyContext);

/// A matrix polynomial times `e^{-x²/2}`.
pub struct MsGaussian(MatrixGaussian);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> MsStatus {
    match e {
        Error::Parameter(_) => MsStatus::Parameter,
        Error::Domain(_) => MsStatus::Domain,
        Error::Range(_) => MsStatus::Range,
        Error::Numeric(_) => MsStatus::Numeric,
        Error::Consistency(_) => MsStatus::Consistency,
        Error::Parse(_) => MsStatus::Parse,
        Error::Io(_) => MsStatus::Io,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MsStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            MsStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            MsStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

fn check_out<T>(p: *mut T, what: &'static str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail::Null(what))
    } else {
        Ok(())
    }
}

fn quad(order: usize) -> QuadOrder {
    if order == 0 {
        QuadOrder::Auto
    } else {
        QuadOrder::Fixed(order)
    }
}

/// Writes `m` row-major into `re` and `im`, each of length `N*N`.
unsafe fn write_matrix(m: &CMat, re: *mut f64, im: *mut f64) -> Result<(), Fail> {
    check_out(re, "re")?;
    check_out(im, "im")?;
    let n = m.nrows();
    for r in 0..n {
        for c in 0..n {
            *re.add(r * n + c) = m[(r, c)].re;
            *im.add(r * n + c) = m[(r, c)].im;
        }
    }
    Ok(())
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length, 0 if none.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn ms_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| match &*e.borrow() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes();
            if !buf.is_null() && len > 0 {
                let n = bytes.len().min(len - 1);
                ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
                *buf.add(n) = 0;
            }
            bytes.len()
        }
    })
}

/// Builds a family of `kind` (1 or 2), size `size` and `size - 1`
/// parameters `nu`. `quad_order = 0` selects the automatic order.
///
/// # Safety
/// `nu` must be valid for `size - 1` reads (may be null when `size == 1`);
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_family_new(
    kind: u8,
    size: usize,
    nu: *const f64,
    n_max: usize,
    quad_order: usize,
    out: *mut *mut MsFamily,
) -> MsStatus {
    guard(|| {
        check_out(out, "out")?;
        let count = size.saturating_sub(1);
        let values = if count == 0 {
            Vec::new()
        } else if nu.is_null() {
            return Err(Fail::Null("nu"));
        } else {
            std::slice::from_raw_parts(nu, count).to_vec()
        };
        let spec = FamilySpec::new(Kind::from_number(kind)?, size, values)?;
        let ctx = build_family(&spec, n_max, quad(quad_order))?;
        *out = Box::into_raw(Box::new(MsFamily(ctx)));
        Ok(())
    })
}

/// Builds a family from `{"kind":k,"N":n,"nu":[…]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_family_from_json(
    json: *const c_char,
    n_max: usize,
    quad_order: usize,
    out: *mut *mut MsFamily,
) -> MsStatus {
    guard(|| {
        check_out(out, "out")?;
        if json.is_null() {
            return Err(Fail::Null("json"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| Error::Parse(e.to_string()))?;
        let spec = FamilySpec::from_json(text)?;
        let ctx = build_family(&spec, n_max, quad(quad_order))?;
        *out = Box::into_raw(Box::new(MsFamily(ctx)));
        Ok(())
    })
}

/// # Safety
/// `family` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ms_family_free(family: *mut MsFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Matrix size `N`, or 0 for a null handle.
///
/// # Safety
/// `family` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ms_family_size(family: *const MsFamily) -> usize {
    family.as_ref().map_or(0, |f| f.0.size())
}

/// Largest available index, or 0 for a null handle.
///
/// # Safety
/// `family` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ms_family_n_max(family: *const MsFamily) -> usize {
    family.as_ref().map_or(0, |f| f.0.n_max())
}

/// `Φ_n`, or `Φ̃_n` when `normalized` is true, as a new handle.
///
/// # Safety
/// `family` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_family_phi(
    family: *const MsFamily,
    n: usize,
    normalized: bool,
    out: *mut *mut MsGaussian,
) -> MsStatus {
    guard(|| {
        let f = &deref(family, "family")?.0;
        check_out(out, "out")?;
        let g = if normalized { f.phi_tilde(n)? } else { f.phi(n)? };
        *out = Box::into_raw(Box::new(MsGaussian(g.clone())));
        Ok(())
    })
}

/// Diagonal of `⟨P_n, P_n⟩_W` into `out` (length `N`).
///
/// # Safety
/// `family` must be a live handle; `out` valid for `N` writes.
#[no_mangle]
pub unsafe extern "C" fn ms_family_norm(family: *const MsFamily, n: usize, out: *mut f64) -> MsStatus {
    guard(|| {
        let f = &deref(family, "family")?.0;
        check_out(out, "out")?;
        let d = f.norm(n)?;
        ptr::copy_nonoverlapping(d.as_ptr(), out, d.len());
        Ok(())
    })
}

/// `(x^k I)_{nm}`, row-major into `re` and `im`.
///
/// # Safety
/// `family` must be a live handle; `re`, `im` valid for `N*N` writes.
#[no_mangle]
pub unsafe extern "C" fn ms_family_matrix_element(
    family: *const MsFamily,
    k: u32,
    n: usize,
    m: usize,
    re: *mut f64,
    im: *mut f64,
) -> MsStatus {
    guard(|| {
        let f = &deref(family, "family")?.0;
        let block = matrix_element(f, k, n, m)?;
        write_matrix(&block, re, im)
    })
}

/// Entry `(i, j)` (0-based) of `Φ̃_n Φ̃_n*` at `x`.
///
/// # Safety
/// `family` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_family_density(
    family: *const MsFamily,
    n: usize,
    i: usize,
    j: usize,
    x: f64,
    out: *mut f64,
) -> MsStatus {
    guard(|| {
        let f = &deref(family, "family")?.0;
        check_out(out, "out")?;
        *out = density(f, n, i, j, x)?;
        Ok(())
    })
}

/// Runs every identity suite. `tol <= 0` keeps the per-suite defaults.
/// Writes the number of suites and of failures; a failed suite is not an
/// error status.
///
/// # Safety
/// `family` must be a live handle; `total` and `failed` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_family_check(
    family: *const MsFamily,
    tol: f64,
    total: *mut usize,
    failed: *mut usize,
) -> MsStatus {
    guard(|| {
        let f = &deref(family, "family")?.0;
        check_out(total, "total")?;
        check_out(failed, "failed")?;
        let tol = if tol > 0.0 { Some(tol) } else { None };
        let results = run_checks(f, tol, DEFAULT_SEED)?;
        *total = results.len();
        *failed = results.iter().filter(|r| !r.passed).count();
        Ok(())
    })
}

/// Parses the JSON function format.
///
/// # Safety
/// `json` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_gaussian_from_json(json: *const c_char, out: *mut *mut MsGaussian) -> MsStatus {
    guard(|| {
        check_out(out, "out")?;
        if json.is_null() {
            return Err(Fail::Null("json"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| Error::Parse(e.to_string()))?;
        *out = Box::into_raw(Box::new(MsGaussian(gaussian_from_json(text)?)));
        Ok(())
    })
}

/// Serializes to the JSON function format; free the string with
/// [`ms_string_free`].
///
/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_gaussian_to_json(g: *const MsGaussian, out: *mut *mut c_char) -> MsStatus {
    guard(|| {
        let g = &deref(g, "g")?.0;
        check_out(out, "out")?;
        let s = CString::new(gaussian_to_json(g)).expect("JSON has no NUL");
        *out = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ms_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ms_gaussian_free(g: *mut MsGaussian) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Matrix size, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ms_gaussian_size(g: *const MsGaussian) -> usize {
    g.as_ref().map_or(0, |g| g.0.size())
}

/// Polynomial degree, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ms_gaussian_degree(g: *const MsGaussian) -> usize {
    g.as_ref().map_or(0, |g| g.0.degree())
}

/// Value at `x`, row-major into `re` and `im`.
///
/// # Safety
/// `g` must be a live handle; `re`, `im` valid for `N*N` writes.
#[no_mangle]
pub unsafe extern "C" fn ms_gaussian_eval(g: *const MsGaussian, x: f64, re: *mut f64, im: *mut f64) -> MsStatus {
    guard(|| {
        let g = &deref(g, "g")?.0;
        write_matrix(&g.eval(x), re, im)
    })
}

/// `F_k` applied to `g` (or its inverse), as a new handle.
///
/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_gaussian_transform(
    g: *const MsGaussian,
    k: i64,
    inverse: bool,
    out: *mut *mut MsGaussian,
) -> MsStatus {
    guard(|| {
        let g = &deref(g, "g")?.0;
        check_out(out, "out")?;
        *out = Box::into_raw(Box::new(MsGaussian(g.transform(k, inverse)?)));
        Ok(())
    })
}

/// Max-norm coefficient distance between two functions of equal size.
///
/// # Safety
/// `a`, `b` live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_gaussian_distance(a: *const MsGaussian, b: *const MsGaussian, out: *mut f64) -> MsStatus {
    guard(|| {
        let a = &deref(a, "a")?.0;
        let b = &deref(b, "b")?.0;
        check_out(out, "out")?;
        *out = a.distance(b)?;
        Ok(())
    })
}

/// Normalized Hermite function `ψ_n(x)`.
#[no_mangle]
pub extern "C" fn ms_wave_function(n: usize, x: f64) -> f64 {
    wave_function(n, x)
}

/// Library version, static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ms_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
