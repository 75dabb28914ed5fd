//! C interface to `shilov-core`.
//!
//! Every entry point returns an [`ShStatus`]. On failure the message is
//! available from [`sh_last_error`] until the next call on the same thread.
//! Strings handed out by the library must be released with
//! [`sh_string_free`]; handles with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use shilov_core::arith::{int, parse_rat, LogVal};
use shilov_core::config::{ExperimentConfig, Format};
use shilov_core::equi::{eq_measure, theorem_harness};
use shilov_core::metrics::{shilov_set, spec_val};
use shilov_core::solver::{solve_prescribed, SolveOptions, SolveProblem, WeightVec};
use shilov_core::ultra::DEFAULT_CAP;
use shilov_core::{Error, HomPoly, MetricSpec};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidInput = 2,
    Numerical = 3,
    Io = 4,
    Panic = 5,
}

/// A validated metric specification.
pub struct ShMetric(MetricSpec);

/// A homogeneous polynomial over the Hahn field.
pub struct ShPoly(HomPoly);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(e: &Error) -> ShStatus {
    match e {
        Error::Io(_) | Error::Csv(_) => ShStatus::Io,
        _ if e.is_validation() => ShStatus::InvalidInput,
        _ => ShStatus::Numerical,
    }
}

enum Fail {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

/// Runs `f`, recording any failure and converting panics.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ShStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ShStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null argument: {what}"));
            ShStatus::NullArgument
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            ShStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Core(Error::Invalid(format!("{what} is not UTF-8"))))
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn emit(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("out"));
    }
    let c = CString::new(s).map_err(|_| Fail::Core(Error::Invalid("interior NUL in output".into())))?;
    *out = c.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Owned by the
/// library; valid until the next call.
#[no_mangle]
pub extern "C" fn sh_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an experiment file body. `json` selects JSON instead of TOML.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_metric_parse(text: *const c_char, json: bool, out: *mut *mut ShMetric) -> ShStatus {
    guard(|| {
        let t = read_str(text, "text")?;
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let fmt = if json { Format::Json } else { Format::Toml };
        let spec = ExperimentConfig::parse(t, fmt)?.spec()?;
        *out = Box::into_raw(Box::new(ShMetric(spec)));
        Ok(())
    })
}

/// # Safety
/// `m` must be NULL or a handle from [`sh_metric_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sh_metric_free(m: *mut ShMetric) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Projective dimension, or 0 for a NULL handle.
///
/// # Safety
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sh_metric_dim(m: *const ShMetric) -> usize {
    m.as_ref().map_or(0, |m| m.0.d())
}

/// # Safety
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sh_metric_len(m: *const ShMetric) -> usize {
    m.as_ref().map_or(0, |m| m.0.len())
}

/// Parses a homogeneous polynomial in `x0..x{nvars-1}`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_poly_parse(text: *const c_char, nvars: usize, out: *mut *mut ShPoly) -> ShStatus {
    guard(|| {
        let t = read_str(text, "text")?;
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        *out = Box::into_raw(Box::new(ShPoly(HomPoly::parse(t, nvars)?)));
        Ok(())
    })
}

/// # Safety
/// `p` must be NULL or a handle from [`sh_poly_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sh_poly_free(p: *mut ShPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Valuation `-log |f|` of the sup norm, as a rational string or `inf`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_spec_val(m: *const ShMetric, f: *const ShPoly, out: *mut *mut c_char) -> ShStatus {
    guard(|| {
        let (m, f) = (handle(m, "metric")?, handle(f, "poly")?);
        m.0.check_poly(&f.0)?;
        let s = match spec_val(&m.0, &f.0) {
            LogVal::Finite(v) => v.to_string(),
            LogVal::Infinite => "inf".to_string(),
        };
        emit(out, s)
    })
}

/// Writes the Shilov point indices into `buf` (capacity `cap`) and their
/// number into `len`. If `cap` is too small only `len` is written.
///
/// # Safety
/// `m` must be live; `buf` must hold `cap` entries; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_shilov_set(m: *const ShMetric, buf: *mut usize, cap: usize, len: *mut usize) -> ShStatus {
    guard(|| {
        let m = handle(m, "metric")?;
        if len.is_null() {
            return Err(Fail::Null("len"));
        }
        let members = shilov_set(&m.0)?.members;
        *len = members.len();
        if members.len() <= cap {
            if buf.is_null() && !members.is_empty() {
                return Err(Fail::Null("buf"));
            }
            for (k, a) in members.into_iter().enumerate() {
                *buf.add(k) = a;
            }
        }
        Ok(())
    })
}

/// Equidistribution measure as JSON.
///
/// # Safety
/// `m` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_eq_measure_json(m: *const ShMetric, out: *mut *mut c_char) -> ShStatus {
    guard(|| {
        let m = handle(m, "metric")?;
        let s = serde_json::to_string(&eq_measure(&m.0)?).map_err(Error::from)?;
        emit(out, s)
    })
}

/// Convergence report for degrees `1..=nmax` as CSV.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_limit_csv(
    m: *const ShMetric,
    f: *const ShPoly,
    nmax: usize,
    out: *mut *mut c_char,
) -> ShStatus {
    guard(|| {
        let (m, f) = (handle(m, "metric")?, handle(f, "poly")?);
        let report = theorem_harness(&m.0, &f.0, nmax, &int(DEFAULT_CAP))?;
        let mut buf = Vec::new();
        report.write_csv(&mut buf)?;
        emit(out, String::from_utf8(buf).expect("csv is utf-8"))
    })
}

/// Shifts of the metric's weight vectors realizing `target`, a
/// comma-separated list of rationals. Result as JSON.
///
/// # Safety
/// `m` must be live; `target` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sh_solve_json(
    m: *const ShMetric,
    target: *const c_char,
    tol: f64,
    out: *mut *mut c_char,
) -> ShStatus {
    guard(|| {
        let m = handle(m, "metric")?;
        let target = read_str(target, "target")?
            .split(',')
            .map(parse_rat)
            .collect::<Result<Vec<_>, _>>()?;
        let problem = SolveProblem {
            d: m.0.d(),
            points: m.0.points().iter().map(|p| WeightVec(p.w.clone())).collect(),
            target,
        };
        let res = solve_prescribed(
            &problem,
            &SolveOptions {
                tol,
                ..SolveOptions::default()
            },
        )?;
        emit(out, serde_json::to_string(&res).map_err(Error::from)?)
    })
}
