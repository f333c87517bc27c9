//! C ABI over the spiralguide library.
//!
//! Objects cross the boundary as opaque handles created by `sg_*_new` style
//! constructors and released with the matching `*_free`. Every fallible call
//! returns an [`SgStatus`]; the message of the last failure on the calling
//! thread is available from [`sg_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use spiralguide::config::RunConfig;
use spiralguide::experiments::{spectrum, SpectrumReport};
use spiralguide::{Error, Spiral, SpiralSpec};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed or inconsistent JSON input.
    Config = 3,
    /// θ outside the spiral's domain, or a width that does not exist there.
    Geometry = 4,
    /// Factorization or eigensolver failure.
    Solver = 5,
    OutOfRange = 6,
    /// The requested quantity is not defined for this input.
    Unavailable = 7,
    Panic = 8,
}

/// A validated spiral curve.
pub struct SgSpiral {
    inner: Spiral,
}

/// Result of a spectrum solve.
pub struct SgSpectrum {
    inner: SpectrumReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> SgStatus {
    match e {
        Error::Config(_) | Error::InvalidSpec(_) | Error::InvalidInput(_) | Error::Io(_) => SgStatus::Config,
        Error::Domain { .. }
        | Error::Range { .. }
        | Error::NoIntersection { .. }
        | Error::Geometry(_)
        | Error::CoordinateBreakdown { .. } => SgStatus::Geometry,
        Error::IndexOutOfRange { .. } | Error::InsufficientWindow { .. } => SgStatus::OutOfRange,
        Error::ClassificationUnavailable(_) => SgStatus::Unavailable,
        Error::Convergence { .. } | Error::Assembly(_) | Error::Factorization { .. } | Error::IterationLimit { .. } => {
            SgStatus::Solver
        }
    }
}

/// Runs `f`, turning errors and panics into a status plus a stored message.
fn guard(f: impl FnOnce() -> Result<(), (SgStatus, String)>) -> SgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SgStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SgStatus::Panic
        }
    }
}

fn lib(e: Error) -> (SgStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (SgStatus, String) {
    (SgStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (SgStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| (SgStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), (SgStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

/// Message of the last failed call on this thread, or NULL if none failed.
/// The string stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a spiral specification such as
/// `{"family": "archimedean", "a": 0.5, "beta": 10.5}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sg_spiral_from_json(json: *const c_char, out: *mut *mut SgSpiral) -> SgStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let spec = SpiralSpec::from_json(text).map_err(lib)?;
        let spiral = Spiral::new(spec).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(SgSpiral { inner: spiral })))
    })
}

/// # Safety
/// `spiral` must come from [`sg_spiral_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sg_spiral_free(spiral: *mut SgSpiral) {
    if !spiral.is_null() {
        drop(Box::from_raw(spiral));
    }
}

unsafe fn spiral_query(
    spiral: *const SgSpiral,
    out: *mut f64,
    f: impl FnOnce(&Spiral) -> spiralguide::Result<f64>,
) -> SgStatus {
    guard(|| {
        let s = spiral.as_ref().ok_or_else(|| null("spiral"))?;
        write_out(out, f(&s.inner).map_err(lib)?)
    })
}

/// Polar radius r(θ).
///
/// # Safety
/// `spiral` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_spiral_radius(spiral: *const SgSpiral, theta: f64, out: *mut f64) -> SgStatus {
    spiral_query(spiral, out, |s| s.radius(theta))
}

/// Signed curvature κ(θ).
///
/// # Safety
/// `spiral` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_spiral_curvature(spiral: *const SgSpiral, theta: f64, out: *mut f64) -> SgStatus {
    spiral_query(spiral, out, |s| s.curvature(theta).map(|c| c.kappa))
}

/// Arc length from θ_min to θ.
///
/// # Safety
/// `spiral` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_spiral_arc_length(spiral: *const SgSpiral, theta: f64, out: *mut f64) -> SgStatus {
    spiral_query(spiral, out, |s| s.arc_length(theta))
}

/// Width function (m/2π)(r(θ) − r(θ − 2π/m)).
///
/// # Safety
/// `spiral` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_spiral_width(spiral: *const SgSpiral, theta: f64, out: *mut f64) -> SgStatus {
    spiral_query(spiral, out, |s| s.width_function(theta))
}

/// Distance along the inward normal at θ to the previous coil.
///
/// # Safety
/// `spiral` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_spiral_orthogonal_width(spiral: *const SgSpiral, theta: f64, out: *mut f64) -> SgStatus {
    spiral_query(spiral, out, |s| s.orthogonal_width(theta).map(|w| w.u))
}

/// Solves for the spectrum described by a JSON run configuration (the same
/// format the command-line tool reads).
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_spectrum_solve(config_json: *const c_char, out: *mut *mut SgSpectrum) -> SgStatus {
    guard(|| {
        let text = str_arg(config_json, "config_json")?;
        let cfg = RunConfig::from_json(text).map_err(lib)?;
        let report = spectrum(&cfg).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(SgSpectrum { inner: report })))
    })
}

/// # Safety
/// `spectrum` must come from [`sg_spectrum_solve`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sg_spectrum_free(spectrum: *mut SgSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Number of computed eigenvalues; 0 for a NULL handle.
///
/// # Safety
/// `spectrum` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sg_spectrum_len(spectrum: *const SgSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.inner.eigenvalues.len())
}

unsafe fn spectrum_entry(spectrum: *const SgSpectrum, index: usize, out: *mut f64, residual: bool) -> SgStatus {
    guard(|| {
        let s = &spectrum.as_ref().ok_or_else(|| null("spectrum"))?.inner;
        let values = if residual { &s.residuals } else { &s.eigenvalues };
        let v = values.get(index).ok_or_else(|| {
            lib(Error::IndexOutOfRange { index, available: values.len() })
        })?;
        write_out(out, *v)
    })
}

/// Eigenvalue `index` (0-based, ascending).
///
/// # Safety
/// `spectrum` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_spectrum_eigenvalue(spectrum: *const SgSpectrum, index: usize, out: *mut f64) -> SgStatus {
    spectrum_entry(spectrum, index, out, false)
}

/// Relative residual of eigenpair `index` (0-based).
///
/// # Safety
/// `spectrum` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_spectrum_residual(spectrum: *const SgSpectrum, index: usize, out: *mut f64) -> SgStatus {
    spectrum_entry(spectrum, index, out, true)
}

/// Bottom of the essential spectrum; `SG_STATUS_UNAVAILABLE` when it is not a
/// finite positive number.
///
/// # Safety
/// `spectrum` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_spectrum_threshold(spectrum: *const SgSpectrum, out: *mut f64) -> SgStatus {
    guard(|| {
        let s = &spectrum.as_ref().ok_or_else(|| null("spectrum"))?.inner;
        let t = s.threshold.ok_or_else(|| (SgStatus::Unavailable, "no finite positive threshold".to_string()))?;
        write_out(out, t)
    })
}

/// Number of degrees of freedom of the discretisation.
///
/// # Safety
/// `spectrum` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sg_spectrum_dof(spectrum: *const SgSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.inner.n_dof)
}
