//! C ABI for the certified bidisc solver.
//!
//! Configurations and certificates are opaque heap handles owned by the
//! caller and released with their `_free` function. Every fallible call
//! returns a [`BidiscStatus`]; on failure a message is kept per thread and
//! can be read with [`bidisc_last_error`]. Points are passed as four
//! doubles `re1, im1, re2, im2`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bidisc::regions::{classify, RegionLabel};
use bidisc::solver::{solve, Certificate, CertificateStatus, Problem, SolverConfig};
use bidisc::{BidiscPoint, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BidiscStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidPoint = 2,
    InvalidArgument = 3,
    DiagonalPoles = 4,
    PoleAtBase = 5,
    NoConvergence = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BidiscRegion {
    Diagonal = 0,
    PoleAtBase = 1,
    ThinA = 2,
    U = 3,
    SigmaU = 4,
    E1 = 5,
    E2 = 6,
    E3 = 7,
    E4 = 8,
    BoundaryBand = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BidiscCertificateStatus {
    Valid = 0,
    Fallback = 1,
    Invalid = 2,
}

/// Opaque solver configuration.
pub struct BidiscConfig(SolverConfig);

/// Opaque certificate.
pub struct BidiscCertificate(Certificate);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> BidiscStatus {
    match e {
        Error::InvalidPoint(_) => BidiscStatus::InvalidPoint,
        Error::DiagonalPoles => BidiscStatus::DiagonalPoles,
        Error::PoleAtBase => BidiscStatus::PoleAtBase,
        Error::NoConvergence { .. } => BidiscStatus::NoConvergence,
        Error::InvalidArgument(_) | Error::NotUnimodular(_) => BidiscStatus::InvalidArgument,
        _ => BidiscStatus::Internal,
    }
}

fn fail(e: Error) -> BidiscStatus {
    set_error(format!("{}: {e}", e.tag()));
    status_of(&e)
}

/// Runs `f`, turning panics into [`BidiscStatus::Internal`].
fn guarded(f: impl FnOnce() -> BidiscStatus) -> BidiscStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("internal panic");
        BidiscStatus::Internal
    })
}

unsafe fn read_point(ptr: *const f64) -> Option<[f64; 4]> {
    if ptr.is_null() {
        return None;
    }
    Some(std::slice::from_raw_parts(ptr, 4).try_into().unwrap())
}

fn region(label: RegionLabel) -> BidiscRegion {
    match label {
        RegionLabel::Diagonal => BidiscRegion::Diagonal,
        RegionLabel::PoleAtBase => BidiscRegion::PoleAtBase,
        RegionLabel::ThinA => BidiscRegion::ThinA,
        RegionLabel::U => BidiscRegion::U,
        RegionLabel::SigmaU => BidiscRegion::SigmaU,
        RegionLabel::E1 => BidiscRegion::E1,
        RegionLabel::E2 => BidiscRegion::E2,
        RegionLabel::E3 => BidiscRegion::E3,
        RegionLabel::E4 => BidiscRegion::E4,
        RegionLabel::BoundaryBand => BidiscRegion::BoundaryBand,
    }
}

/// Message of the last failed call on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bidisc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static NUL-terminated tag such as `"E1"`.
#[no_mangle]
pub extern "C" fn bidisc_region_name(region: BidiscRegion) -> *const c_char {
    let name: &'static CStr = match region {
        BidiscRegion::Diagonal => c"DIAGONAL",
        BidiscRegion::PoleAtBase => c"POLE_AT_BASE",
        BidiscRegion::ThinA => c"THIN_A",
        BidiscRegion::U => c"U",
        BidiscRegion::SigmaU => c"SIGMA_U",
        BidiscRegion::E1 => c"E1",
        BidiscRegion::E2 => c"E2",
        BidiscRegion::E3 => c"E3",
        BidiscRegion::E4 => c"E4",
        BidiscRegion::BoundaryBand => c"BOUNDARY_BAND",
    };
    name.as_ptr()
}

/// Default configuration. Release with [`bidisc_config_free`].
#[no_mangle]
pub extern "C" fn bidisc_config_new() -> *mut BidiscConfig {
    Box::into_raw(Box::new(BidiscConfig(SolverConfig::default())))
}

/// # Safety
/// `config` must come from [`bidisc_config_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bidisc_config_free(config: *mut BidiscConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// # Safety
/// `config` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn bidisc_config_set_seed(
    config: *mut BidiscConfig,
    seed: u64,
) -> BidiscStatus {
    match config.as_mut() {
        Some(c) => {
            c.0.seed = seed;
            BidiscStatus::Ok
        }
        None => BidiscStatus::NullPointer,
    }
}

/// # Safety
/// `config` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn bidisc_config_set_starts(
    config: *mut BidiscConfig,
    starts: usize,
) -> BidiscStatus {
    match config.as_mut() {
        Some(_) if starts == 0 => fail(Error::InvalidArgument("starts must be positive".into())),
        Some(c) => {
            c.0.starts = starts;
            BidiscStatus::Ok
        }
        None => BidiscStatus::NullPointer,
    }
}

/// # Safety
/// `config` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn bidisc_config_set_eps(
    config: *mut BidiscConfig,
    eps: f64,
) -> BidiscStatus {
    match config.as_mut() {
        Some(_) if !(eps.is_finite() && eps >= 0.0) => {
            fail(Error::InvalidArgument(format!("eps = {eps}")))
        }
        Some(c) => {
            c.0.eps = eps;
            BidiscStatus::Ok
        }
        None => BidiscStatus::NullPointer,
    }
}

/// Solves for base point `z` (null means the origin) and poles `p`, `q`.
/// On success `*out` receives a certificate to release with
/// [`bidisc_certificate_free`]. A null `config` uses the defaults.
///
/// # Safety
/// `z`, `p`, `q` must point to four doubles (or `z` be null); `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn bidisc_solve(
    config: *const BidiscConfig,
    z: *const f64,
    p: *const f64,
    q: *const f64,
    out: *mut *mut BidiscCertificate,
) -> BidiscStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer");
            return BidiscStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let z = if z.is_null() {
            Some([0.0; 4])
        } else {
            read_point(z)
        };
        let (Some(z), Some(p), Some(q)) = (z, read_point(p), read_point(q)) else {
            set_error("null point");
            return BidiscStatus::NullPointer;
        };
        let config = config.as_ref().map_or_else(SolverConfig::default, |c| c.0);
        let solved = (|| {
            let problem = Problem::new(
                BidiscPoint::from_reals(z)?,
                BidiscPoint::from_reals(p)?,
                BidiscPoint::from_reals(q)?,
            )?;
            solve(&problem, &config)
        })();
        match solved {
            Ok(cert) => {
                *out = Box::into_raw(Box::new(BidiscCertificate(cert)));
                BidiscStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `cert` must come from [`bidisc_solve`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bidisc_certificate_free(cert: *mut BidiscCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Natural logarithm of the certified value; NaN for a null handle.
///
/// # Safety
/// `cert` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn bidisc_certificate_value(cert: *const BidiscCertificate) -> f64 {
    cert.as_ref().map_or(f64::NAN, |c| c.0.value)
}

/// Worst residual of the certificate; NaN for a null handle.
///
/// # Safety
/// `cert` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn bidisc_certificate_residual(cert: *const BidiscCertificate) -> f64 {
    cert.as_ref().map_or(f64::NAN, |c| c.0.residuals.max())
}

/// # Safety
/// `cert` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bidisc_certificate_region(
    cert: *const BidiscCertificate,
    out: *mut BidiscRegion,
) -> BidiscStatus {
    match (cert.as_ref(), out.as_mut()) {
        (Some(c), Some(o)) => {
            *o = region(c.0.region);
            BidiscStatus::Ok
        }
        _ => BidiscStatus::NullPointer,
    }
}

/// # Safety
/// `cert` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bidisc_certificate_status(
    cert: *const BidiscCertificate,
    out: *mut BidiscCertificateStatus,
) -> BidiscStatus {
    match (cert.as_ref(), out.as_mut()) {
        (Some(c), Some(o)) => {
            *o = match c.0.status {
                CertificateStatus::Valid => BidiscCertificateStatus::Valid,
                CertificateStatus::Fallback => BidiscCertificateStatus::Fallback,
                CertificateStatus::Invalid => BidiscCertificateStatus::Invalid,
            };
            BidiscStatus::Ok
        }
        _ => BidiscStatus::NullPointer,
    }
}

/// Full certificate as JSON. The string is owned by the caller and released
/// with [`bidisc_string_free`]; null on failure.
///
/// # Safety
/// `cert` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn bidisc_certificate_json(cert: *const BidiscCertificate) -> *mut c_char {
    let Some(c) = cert.as_ref() else {
        set_error("null certificate");
        return ptr::null_mut();
    };
    match serde_json::to_string(&c.0).map(CString::new) {
        Ok(Ok(s)) => s.into_raw(),
        _ => {
            set_error("serialization failed");
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bidisc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Region of the pole pair `(p, q)` with the base point at the origin, and
/// the margin of the classification.
///
/// # Safety
/// `p`, `q` must point to four doubles; `region_out` must be writable and
/// `margin_out` writable or null.
#[no_mangle]
pub unsafe extern "C" fn bidisc_classify(
    p: *const f64,
    q: *const f64,
    eps: f64,
    region_out: *mut BidiscRegion,
    margin_out: *mut f64,
) -> BidiscStatus {
    guarded(|| {
        let (Some(p), Some(q), Some(r)) = (read_point(p), read_point(q), region_out.as_mut())
        else {
            set_error("null pointer");
            return BidiscStatus::NullPointer;
        };
        let mut reals = [0.0; 8];
        reals[..4].copy_from_slice(&p);
        reals[4..].copy_from_slice(&q);
        match bidisc::PolePair::from_reals(reals) {
            Ok(pair) => {
                let c = classify(&pair, eps);
                *r = region(c.label);
                if let Some(m) = margin_out.as_mut() {
                    *m = c.margin;
                }
                BidiscStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}
