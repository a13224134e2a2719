//! C ABI over `pdw-core`.
//!
//! Objects cross the boundary as opaque handles created by `pdw_*_new`-style
//! constructors and released with the matching `pdw_*_free`. Every fallible
//! call returns a [`PdwStatus`]; on failure a message is available from
//! [`pdw_last_error_message`] until the next failing call on the same thread.
//! Panics are caught and reported as [`PdwStatus::Panic`].

use pdw_core::harmonic::{random_pd_poly, rayleigh_quotient};
use pdw_core::wiener::{self, BoundReport, SolverParams};
use pdw_core::{delsarte, turan, Domain, Error, TrigPolynomial};
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdwStatus {
    Ok = 0,
    InvalidArgument = 1,
    Uncertified = 2,
    PropertyViolation = 3,
    NullPointer = 4,
    Numerical = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdwShape {
    Cube = 0,
    Ball = 1,
}

/// Opaque origin-symmetric convex body.
pub struct PdwDomain(Domain);

/// Opaque trigonometric polynomial.
pub struct PdwPoly(TrigPolynomial);

/// Opaque two-sided bound report.
pub struct PdwReport(BoundReport);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct PdwTuranResult {
    pub lower: f64,
    pub upper: f64,
    pub min_residual: f64,
    pub grid_size: usize,
    pub freq_bound: usize,
    pub certified: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct PdwDelsarteResult {
    pub value: f64,
    pub fourier_min: f64,
    pub spatial_max: f64,
    pub tail_envelope: f64,
    pub certified: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PdwStatus {
    match e {
        Error::InvalidParameter(_) | Error::DomainExceedsCell(_) | Error::UnsupportedShape(_) | Error::DimensionMismatch { .. } => {
            PdwStatus::InvalidArgument
        }
        Error::Mismatch(_) => PdwStatus::PropertyViolation,
        _ => PdwStatus::Numerical,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard<F: FnOnce() -> Result<(), (PdwStatus, String)>>(f: F) -> PdwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PdwStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside pdw".into());
            PdwStatus::Panic
        }
    }
}

fn core<T>(r: pdw_core::Result<T>) -> Result<T, (PdwStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (PdwStatus, String) {
    (PdwStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (PdwStatus, String)> {
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), (PdwStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    unsafe { out.write(value) };
    Ok(())
}

/// Message of the last failing call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pdw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pdw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a cube `[-delta, delta]^dim` or a ball of radius `delta`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pdw_domain_new(shape: PdwShape, dim: usize, delta: f64, out: *mut *mut PdwDomain) -> PdwStatus {
    guard(|| {
        let d = core(match shape {
            PdwShape::Cube => Domain::cube(dim, delta),
            PdwShape::Ball => Domain::ball(dim, delta),
        })?;
        unsafe { write(out, Box::into_raw(Box::new(PdwDomain(d))), "out") }
    })
}

/// # Safety
/// `domain` must come from [`pdw_domain_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pdw_domain_free(domain: *mut PdwDomain) {
    if !domain.is_null() {
        drop(unsafe { Box::from_raw(domain) });
    }
}

/// `|D|`.
///
/// # Safety
/// `domain` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pdw_domain_volume(domain: *const PdwDomain, out: *mut f64) -> PdwStatus {
    guard(|| unsafe {
        let d = deref(domain, "domain")?;
        write(out, d.0.volume(), "out")
    })
}

/// Builds a real-coefficient polynomial from `count` terms; `freqs` holds
/// `count * dim` integers, row by row.
///
/// # Safety
/// `freqs` and `coeffs` must point to arrays of the stated lengths and `out`
/// must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pdw_poly_from_real_coeffs(
    dim: usize,
    freqs: *const i64,
    coeffs: *const f64,
    count: usize,
    out: *mut *mut PdwPoly,
) -> PdwStatus {
    guard(|| {
        if count > 0 && (freqs.is_null() || coeffs.is_null()) {
            return Err(null("freqs or coeffs"));
        }
        let (f, c) = if count == 0 {
            (&[][..], &[][..])
        } else {
            unsafe { (std::slice::from_raw_parts(freqs, count * dim), std::slice::from_raw_parts(coeffs, count)) }
        };
        let terms = (0..count).map(|i| (f[i * dim..(i + 1) * dim].to_vec(), c[i]));
        let p = core(TrigPolynomial::from_real_coeffs(dim, terms))?;
        unsafe { write(out, Box::into_raw(Box::new(PdwPoly(p))), "out") }
    })
}

/// Seeded random positive definite polynomial.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pdw_poly_random_pd(seed: u64, dim: usize, degree: u32, decay: f64, out: *mut *mut PdwPoly) -> PdwStatus {
    guard(|| {
        if dim == 0 {
            return Err((PdwStatus::InvalidArgument, "dimension must be positive".into()));
        }
        let p = random_pd_poly(seed, dim, degree, decay);
        unsafe { write(out, Box::into_raw(Box::new(PdwPoly(p))), "out") }
    })
}

/// # Safety
/// `poly` must come from a `pdw_poly_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pdw_poly_free(poly: *mut PdwPoly) {
    if !poly.is_null() {
        drop(unsafe { Box::from_raw(poly) });
    }
}

/// `∫_{𝕋ⁿ}|f|²`.
///
/// # Safety
/// `poly` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pdw_poly_norm_sq_torus(poly: *const PdwPoly, out: *mut f64) -> PdwStatus {
    guard(|| unsafe {
        let p = deref(poly, "poly")?;
        write(out, p.0.norm_sq_torus(), "out")
    })
}

/// Rayleigh quotient `∫_{𝕋ⁿ}|f|² / (|D|⁻¹∫_D|f|²)`.
///
/// # Safety
/// Handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pdw_rayleigh_quotient(poly: *const PdwPoly, domain: *const PdwDomain, out: *mut f64) -> PdwStatus {
    guard(|| unsafe {
        let (p, d) = (deref(poly, "poly")?, deref(domain, "domain")?);
        write(out, core(rayleigh_quotient(&p.0, &d.0))?, "out")
    })
}

/// Hlawka's inequality for a positive definite `poly`. Returns
/// [`PdwStatus::PropertyViolation`] when it fails; `rayleigh` receives the
/// quotient either way.
///
/// # Safety
/// Handles must be live and `rayleigh` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pdw_hlawka_verify(poly: *const PdwPoly, domain: *const PdwDomain, rayleigh: *mut f64) -> PdwStatus {
    guard(|| unsafe {
        let (p, d) = (deref(poly, "poly")?, deref(domain, "domain")?);
        let check = core(wiener::hlawka_verify(&p.0, &d.0))?;
        write(rayleigh, check.rayleigh, "rayleigh")?;
        if check.passed {
            Ok(())
        } else {
            Err((PdwStatus::PropertyViolation, format!("Rayleigh quotient {} exceeds 2^n", check.rayleigh)))
        }
    })
}

/// Turán LP lower bound for `[-delta, delta]`. `freq_bound = 0` selects the
/// default. An uncertified witness is still written to `out` and reported as
/// [`PdwStatus::Uncertified`].
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pdw_turan_lp_lower(delta: f64, grid_size: usize, freq_bound: usize, out: *mut PdwTuranResult) -> PdwStatus {
    guard(|| {
        core(turan::check_delta(delta))?;
        let n = if freq_bound == 0 { turan::default_freq_bound(delta, grid_size) } else { freq_bound };
        let e = core(turan::turan_lp_lower(delta, grid_size, n))?;
        let r = PdwTuranResult {
            lower: e.lower,
            upper: e.upper,
            min_residual: e.min_residual,
            grid_size: e.grid_size,
            freq_bound: e.freq_bound,
            certified: e.certified,
        };
        unsafe { write(out, r, "out")? };
        if e.certified {
            Ok(())
        } else {
            Err((PdwStatus::Uncertified, format!("min residual {} below tolerance", e.min_residual)))
        }
    })
}

/// Delsarte LP bound for the ball of radius `radius` in dimension `dim`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pdw_delsarte_lp(dim: usize, radius: f64, basis_size: usize, grid_size: usize, out: *mut PdwDelsarteResult) -> PdwStatus {
    guard(|| {
        let b = core(delsarte::delsarte_lp(dim, radius, basis_size, grid_size))?;
        let r = PdwDelsarteResult {
            value: b.value,
            fourier_min: b.residuals.fourier_min,
            spatial_max: b.residuals.spatial_max,
            tail_envelope: b.residuals.tail_envelope,
            certified: b.certified,
        };
        unsafe { write(out, r, "out")? };
        if b.certified {
            Ok(())
        } else {
            Err((PdwStatus::Uncertified, "Delsarte residuals exceed the audit tolerance".into()))
        }
    })
}

/// `θ(δ) = 1 − δ / a` from the Turán witness.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pdw_theta(delta: f64, out: *mut f64) -> PdwStatus {
    guard(|| {
        let t = core(wiener::theta(delta, &SolverParams::default()))?;
        unsafe { write(out, t.value, "out")? };
        if t.certified {
            Ok(())
        } else {
            Err((PdwStatus::Uncertified, "Turán witness not certified".into()))
        }
    })
}

/// Two-sided bounds for `W_n(D)` with default solver settings; `q = 0`
/// picks the largest admissible lattice order.
///
/// # Safety
/// `domain` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pdw_wiener_bounds(domain: *const PdwDomain, q: u32, out: *mut *mut PdwReport) -> PdwStatus {
    guard(|| unsafe {
        let d = deref(domain, "domain")?;
        let q = (q != 0).then_some(q);
        let r = core(wiener::wiener_bounds(&d.0, q, None, &SolverParams::default()))?;
        write(out, Box::into_raw(Box::new(PdwReport(r))), "out")
    })
}

/// # Safety
/// `report` must come from [`pdw_wiener_bounds`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pdw_report_free(report: *mut PdwReport) {
    if !report.is_null() {
        drop(unsafe { Box::from_raw(report) });
    }
}

/// Lower and upper values of a report.
///
/// # Safety
/// `report` must be a live handle; `lower` and `upper` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pdw_report_bounds(report: *const PdwReport, lower: *mut f64, upper: *mut f64) -> PdwStatus {
    guard(|| unsafe {
        let r = deref(report, "report")?;
        write(lower, r.0.lower.value, "lower")?;
        write(upper, r.0.upper.value, "upper")
    })
}

/// The report as JSON; release the string with [`pdw_string_free`].
///
/// # Safety
/// `report` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pdw_report_json(report: *const PdwReport, out: *mut *mut c_char) -> PdwStatus {
    guard(|| unsafe {
        let r = deref(report, "report")?;
        let s = serde_json::to_string(&r.0).map_err(|e| (PdwStatus::Numerical, e.to_string()))?;
        let c = CString::new(s).map_err(|e| (PdwStatus::Numerical, e.to_string()))?;
        write(out, c.into_raw(), "out")
    })
}

/// # Safety
/// `s` must come from a `pdw_*` function documented to return an owned
/// string, and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pdw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
