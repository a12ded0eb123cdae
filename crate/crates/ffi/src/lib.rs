//! C interface to the graph complex engine.
//!
//! Objects cross the boundary as opaque handles (`GcxEngine`, `GcxCochain`)
//! that the caller releases with the matching `*_free`. Every fallible call
//! returns a `GcxStatus`; on failure `gcx_last_error` describes the error
//! for the calling thread. Strings returned by the library are released
//! with `gcx_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gcomplex::cache::{BasisStore, Bounds};
use gcomplex::calculus::{bracket, differential};
use gcomplex::cochain::Cochain;
use gcomplex::homology::Engine;
use gcomplex::named::named_cochain;
use gcomplex::{ComplexSpec, Flavor};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GcxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Computation = 4,
    Panic = 5,
}

/// Basis store, memoized matrices and ranks.
pub struct GcxEngine(Engine);

/// A finite linear combination of graphs with rational coefficients.
pub struct GcxCochain(Cochain);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(GcxStatus, String);

impl Failure {
    fn arg(msg: impl std::fmt::Display) -> Self {
        Failure(GcxStatus::InvalidArgument, msg.to_string())
    }

    fn comp(err: impl std::fmt::Display) -> Self {
        Failure(GcxStatus::Computation, err.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> GcxStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GcxStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            GcxStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(GcxStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(GcxStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(GcxStatus::NullPointer, format!("{what} is null")))
}

fn out_ptr<T>(out: *mut T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure(GcxStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn spec_of(flavor: &str, n: i64) -> Result<ComplexSpec, Failure> {
    let flavor: Flavor = flavor.parse().map_err(Failure::arg)?;
    Ok(ComplexSpec::new(flavor, n))
}

fn store_cochain(x: Cochain, out: *mut *mut GcxCochain) {
    // SAFETY: callers check `out` first
    unsafe { *out = Box::into_raw(Box::new(GcxCochain(x))) };
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library and valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn gcx_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn gcx_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Create an engine admitting buckets with at most `max_v` vertices,
/// `max_e` edges and `max_l` legs.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn gcx_engine_new(
    max_v: usize,
    max_e: usize,
    max_l: usize,
    out: *mut *mut GcxEngine,
) -> GcxStatus {
    guard(|| {
        out_ptr(out, "out")?;
        if max_v == 0 || max_v > 16 {
            return Err(Failure::arg(format!("max_v must be in 1..=16, got {max_v}")));
        }
        let engine = Engine::new(BasisStore::in_memory(Bounds { max_v, max_e, max_l }));
        *out = Box::into_raw(Box::new(GcxEngine(engine)));
        Ok(())
    })
}

/// # Safety
/// `engine` must be null or a handle from `gcx_engine_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcx_engine_free(engine: *mut GcxEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Cohomology dimension at loop order `b` and degree `d`, with ranks
/// confirmed over two primes (and the rationals when small).
///
/// # Safety
/// `engine` must be a live handle, `flavor` a NUL-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcx_cohomology_dim(
    engine: *const GcxEngine,
    flavor: *const c_char,
    n: i64,
    b: i64,
    d: i64,
    out: *mut usize,
) -> GcxStatus {
    guard(|| {
        let engine = deref(engine, "engine")?;
        let spec = spec_of(str_arg(flavor, "flavor")?, n)?;
        out_ptr(out, "out")?;
        let report = engine.0.cohomology_confirmed(&spec, b, d).map_err(Failure::comp)?;
        *out = report.h_dim;
        Ok(())
    })
}

/// Number of basis classes in the bucket with `v` vertices, `e` edges and `l` legs.
///
/// # Safety
/// As for `gcx_cohomology_dim`.
#[no_mangle]
pub unsafe extern "C" fn gcx_basis_size(
    engine: *const GcxEngine,
    flavor: *const c_char,
    n: i64,
    v: usize,
    e: usize,
    l: usize,
    out: *mut usize,
) -> GcxStatus {
    guard(|| {
        let engine = deref(engine, "engine")?;
        let spec = spec_of(str_arg(flavor, "flavor")?, n)?;
        out_ptr(out, "out")?;
        *out = engine.0.store.basis(&spec, v, e, l).map_err(Failure::comp)?.len();
        Ok(())
    })
}

/// A named cochain (`edge`, `theta`, `wheel`, `shoikhet`, ...). `param` is
/// the length or arity where the name takes one; pass a negative value otherwise.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcx_cochain_named(
    name: *const c_char,
    n: i64,
    param: i64,
    out: *mut *mut GcxCochain,
) -> GcxStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        out_ptr(out, "out")?;
        let param = usize::try_from(param).ok();
        store_cochain(named_cochain(name, n, param).map_err(Failure::comp)?, out);
        Ok(())
    })
}

/// Parse a cochain from its text form.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcx_cochain_parse(text: *const c_char, out: *mut *mut GcxCochain) -> GcxStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        out_ptr(out, "out")?;
        store_cochain(Cochain::from_text(text).map_err(Failure::arg)?, out);
        Ok(())
    })
}

/// # Safety
/// `x` must be a live cochain handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcx_cochain_differential(x: *const GcxCochain, out: *mut *mut GcxCochain) -> GcxStatus {
    guard(|| {
        let x = deref(x, "x")?;
        out_ptr(out, "out")?;
        store_cochain(differential(&x.0), out);
        Ok(())
    })
}

/// # Safety
/// `x` and `y` must be live cochain handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcx_cochain_bracket(
    x: *const GcxCochain,
    y: *const GcxCochain,
    out: *mut *mut GcxCochain,
) -> GcxStatus {
    guard(|| {
        let (x, y) = (deref(x, "x")?, deref(y, "y")?);
        out_ptr(out, "out")?;
        store_cochain(bracket(&x.0, &y.0).map_err(Failure::comp)?, out);
        Ok(())
    })
}

/// Number of terms.
///
/// # Safety
/// `x` must be a live cochain handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcx_cochain_len(x: *const GcxCochain, out: *mut usize) -> GcxStatus {
    guard(|| {
        let x = deref(x, "x")?;
        out_ptr(out, "out")?;
        *out = x.0.len();
        Ok(())
    })
}

/// Text form of `x`; release with `gcx_string_free`.
///
/// # Safety
/// `x` must be a live cochain handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcx_cochain_to_text(x: *const GcxCochain, out: *mut *mut c_char) -> GcxStatus {
    guard(|| {
        let x = deref(x, "x")?;
        out_ptr(out, "out")?;
        *out = CString::new(x.0.to_text()).map_err(Failure::comp)?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `x` must be null or a cochain handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcx_cochain_free(x: *mut GcxCochain) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
