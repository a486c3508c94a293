//! C interface: opaque map handles, status codes and a per-thread error
//! message. Every function catches panics and reports them as
//! `TV_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use transverse_core::cube::{compose, CubeMap, ExtDist, Rational};
use transverse_core::homset::{count_homset, factorize, Budget};
use transverse_core::point::{d1_point, RPoint};
use transverse_core::topo::t_eval;
use transverse_core::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    NotCotransverse = 4,
    Dimension = 5,
    Budget = 6,
    BufferTooSmall = 7,
    Internal = 8,
}

/// Opaque handle to a validated cotransverse map.
pub struct TvCubeMap {
    inner: CubeMap,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> TvStatus {
    match e {
        Error::Parse(_) | Error::CoordinateOutOfRange(_) => TvStatus::Parse,
        Error::NotCotransverse(_) => TvStatus::NotCotransverse,
        Error::Budget { .. } => TvStatus::Budget,
        Error::DimensionMismatch { .. }
        | Error::DimensionTooLarge(_)
        | Error::VertexOutOfRange { .. } => TvStatus::Dimension,
        _ => TvStatus::Internal,
    }
}

struct Fail(TvStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null() -> Fail {
    Fail(TvStatus::NullPointer, "null pointer argument".into())
}

/// Runs `body`, recording the message of any failure or panic.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> TvStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            TvStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TvStatus::Internal
        }
    }
}

unsafe fn map_ref<'a>(p: *const TvCubeMap) -> Result<&'a CubeMap, Fail> {
    p.as_ref().map(|h| &h.inner).ok_or_else(null)
}

fn boxed(map: CubeMap) -> *mut TvCubeMap {
    Box::into_raw(Box::new(TvCubeMap { inner: map }))
}

unsafe fn store<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn rationals(num: *const i64, den: *const i64, len: usize) -> Result<Vec<Rational>, Fail> {
    if len == 0 {
        return Ok(Vec::new());
    }
    if num.is_null() || den.is_null() {
        return Err(null());
    }
    let (n, d) = (
        std::slice::from_raw_parts(num, len),
        std::slice::from_raw_parts(den, len),
    );
    n.iter()
        .zip(d)
        .map(|(&p, &q)| {
            if q == 0 {
                Err(Fail(TvStatus::Parse, "zero denominator".into()))
            } else {
                Ok(Rational::new(p, q))
            }
        })
        .collect()
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn tv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a literal `m>n:a0,a1,...` into a new handle.
///
/// # Safety
/// `literal` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tv_map_parse(
    literal: *const c_char,
    out: *mut *mut TvCubeMap,
) -> TvStatus {
    guard(|| {
        if literal.is_null() {
            return Err(null());
        }
        let text = CStr::from_ptr(literal)
            .to_str()
            .map_err(|_| Fail(TvStatus::InvalidUtf8, "literal is not UTF-8".into()))?;
        let map: CubeMap = text.parse()?;
        store(out, boxed(map))
    })
}

/// Builds a handle from a table of `2^dom` images.
///
/// # Safety
/// `table` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tv_map_from_table(
    dom: u32,
    cod: u32,
    table: *const u32,
    len: usize,
    out: *mut *mut TvCubeMap,
) -> TvStatus {
    guard(|| {
        if table.is_null() && len > 0 {
            return Err(null());
        }
        let cells = if len == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(table, len).to_vec()
        };
        let map = CubeMap::new(dom as usize, cod as usize, cells)?;
        store(out, boxed(map))
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `map` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tv_map_free(map: *mut TvCubeMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Domain dimension, or 0 for null.
///
/// # Safety
/// `map` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tv_map_dom(map: *const TvCubeMap) -> u32 {
    map.as_ref().map_or(0, |m| m.inner.dom() as u32)
}

/// Codomain dimension, or 0 for null.
///
/// # Safety
/// `map` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tv_map_cod(map: *const TvCubeMap) -> u32 {
    map.as_ref().map_or(0, |m| m.inner.cod() as u32)
}

/// Writes a newly allocated literal; release it with [`tv_string_free`].
///
/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tv_map_to_literal(
    map: *const TvCubeMap,
    out: *mut *mut c_char,
) -> TvStatus {
    guard(|| {
        let lit = CString::new(map_ref(map)?.to_literal()).expect("literals have no NUL");
        store(out, lit.into_raw())
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `g ∘ f` as a new handle.
///
/// # Safety
/// `g` and `f` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tv_map_compose(
    g: *const TvCubeMap,
    f: *const TvCubeMap,
    out: *mut *mut TvCubeMap,
) -> TvStatus {
    guard(|| {
        let c = compose(map_ref(g)?, map_ref(f)?)?;
        store(out, boxed(c))
    })
}

/// Splits `f` as `phi ∘ psi` with `psi` an endo and `phi` cocubical.
///
/// # Safety
/// `f` must be a live handle; `psi` and `phi` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tv_map_factorize(
    f: *const TvCubeMap,
    psi: *mut *mut TvCubeMap,
    phi: *mut *mut TvCubeMap,
) -> TvStatus {
    guard(|| {
        if psi.is_null() || phi.is_null() {
            return Err(null());
        }
        let fac = factorize(map_ref(f)?)?;
        store(psi, boxed(fac.psi))?;
        store(phi, boxed(fac.phi))
    })
}

/// Evaluates the topological extension of `f` at the point with
/// coordinates `num[i]/den[i]`; writes `cod` reduced coordinates.
///
/// # Safety
/// Input arrays hold `len` values, output arrays `out_len` writable values.
#[no_mangle]
pub unsafe extern "C" fn tv_map_eval(
    f: *const TvCubeMap,
    num: *const i64,
    den: *const i64,
    len: usize,
    out_num: *mut i64,
    out_den: *mut i64,
    out_len: usize,
) -> TvStatus {
    guard(|| {
        let f = map_ref(f)?;
        let x = RPoint::new(rationals(num, den, len)?)?;
        let y = t_eval(f, &x)?;
        if out_len < y.dim() {
            return Err(Fail(
                TvStatus::BufferTooSmall,
                format!("need {} output slots", y.dim()),
            ));
        }
        if y.dim() > 0 && (out_num.is_null() || out_den.is_null()) {
            return Err(null());
        }
        for (i, c) in y.coords().iter().enumerate() {
            out_num.add(i).write(*c.numer());
            out_den.add(i).write(*c.denom());
        }
        Ok(())
    })
}

/// Number of cotransverse maps `[m] → [n]`, guarded by the budget from
/// the `TRANSVERSE_BUDGET` environment variable.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tv_count_homset(m: u32, n: u32, out: *mut u64) -> TvStatus {
    guard(|| {
        let count = count_homset(m as usize, n as usize, Budget::from_env())?;
        let count = u64::try_from(count)
            .map_err(|_| Fail(TvStatus::Internal, "count exceeds 64 bits".into()))?;
        store(out, count)
    })
}

/// Directed distance `d₁(x, y)`. Sets `*finite` to false when `x ≰ y`,
/// otherwise writes the distance as `*out_num / *out_den`.
///
/// # Safety
/// The four input arrays hold `len` values; outputs must be writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn tv_d1(
    x_num: *const i64,
    x_den: *const i64,
    y_num: *const i64,
    y_den: *const i64,
    len: usize,
    finite: *mut bool,
    out_num: *mut i64,
    out_den: *mut i64,
) -> TvStatus {
    guard(|| {
        let x = RPoint::new(rationals(x_num, x_den, len)?)?;
        let y = RPoint::new(rationals(y_num, y_den, len)?)?;
        if finite.is_null() || out_num.is_null() || out_den.is_null() {
            return Err(null());
        }
        match d1_point(&x, &y)? {
            ExtDist::Finite(d) => {
                finite.write(true);
                out_num.write(*d.numer());
                out_den.write(*d.denom());
            }
            ExtDist::Infinite => {
                finite.write(false);
                out_num.write(0);
                out_den.write(1);
            }
        }
        Ok(())
    })
}
