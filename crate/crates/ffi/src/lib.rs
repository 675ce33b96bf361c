//! C ABI for `cayley-core`.
//!
//! Every function returns a [`CayleyStatus`]. On failure a description is
//! available from [`cayley_last_error_message`] on the same thread. Groups
//! are opaque handles created by [`cayley_group_new`] and released with
//! [`cayley_group_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::OnceLock;

use cayley_core::bounds::bounds_report;
use cayley_core::experiment::build_group;
use cayley_core::group::FiniteGroup;
use cayley_core::repr::{irrep_spectrum, IrrepSpectrum};
use cayley_core::sampler::{estimate_expected_norm, series_for, Method};
use cayley_core::spencer::{self, SpencerMethod};
use cayley_core::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CayleyStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    OrderCap = 4,
    NotAbelian = 5,
    NonConvergence = 6,
    DegenerateSpectrum = 7,
    BufferTooSmall = 8,
    Internal = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CayleyMethod {
    DirectReal = 0,
    DirectComplex = 1,
    Block = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CayleySpencerMethod {
    BruteForce = 0,
    RandomBestOfK = 1,
    LocalSearch = 2,
    AbelianReduction = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CayleyBounds {
    pub n: usize,
    pub sigma: f64,
    pub v: f64,
    pub w_certificate: f64,
    pub s_norm: f64,
    pub m: f64,
    pub s_star: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CayleyEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
}

/// Opaque group handle.
pub struct CayleyGroup {
    group: FiniteGroup,
    spectrum: OnceLock<IrrepSpectrum>,
}

impl CayleyGroup {
    fn spectrum(&self) -> Result<&IrrepSpectrum, Error> {
        if let Some(s) = self.spectrum.get() {
            return Ok(s);
        }
        let s = irrep_spectrum(&self.group, 0)?;
        Ok(self.spectrum.get_or_init(|| s))
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CayleyStatus {
    match e {
        Error::Parse { .. } | Error::InvalidGenerators(_) | Error::NotOddPrime(_) => CayleyStatus::Parse,
        Error::OrderCap { .. } | Error::DimensionCap { .. } => CayleyStatus::OrderCap,
        Error::NotAbelian(_) => CayleyStatus::NotAbelian,
        Error::NonConvergence { .. } => CayleyStatus::NonConvergence,
        Error::DegenerateSpectrum { .. } => CayleyStatus::DegenerateSpectrum,
        Error::InvalidArgument(_) | Error::MissingSpectrum | Error::NotAConjugacyClass => CayleyStatus::InvalidArgument,
        _ => CayleyStatus::Internal,
    }
}

/// Runs `f`, translating errors and panics into a status and the
/// thread-local message.
fn guard(f: impl FnOnce() -> Result<(), (CayleyStatus, String)>) -> CayleyStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CayleyStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CayleyStatus::Panic
        }
    }
}

fn core<T>(r: Result<T, Error>) -> Result<T, (CayleyStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (CayleyStatus, String) {
    (CayleyStatus::NullPointer, format!("{what} is null"))
}

unsafe fn handle<'a>(g: *const CayleyGroup) -> Result<&'a CayleyGroup, (CayleyStatus, String)> {
    g.as_ref().ok_or_else(|| null("group"))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), (CayleyStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cayley_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a group from a spec string such as `"alt:5"`.
///
/// # Safety
/// `spec` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cayley_group_new(spec: *const c_char, out: *mut *mut CayleyGroup) -> CayleyStatus {
    guard(|| {
        if spec.is_null() {
            return Err(null("spec"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(spec)
            .to_str()
            .map_err(|_| (CayleyStatus::Parse, "spec is not UTF-8".to_string()))?;
        let group = core(build_group(text))?;
        let boxed = Box::new(CayleyGroup { group, spectrum: OnceLock::new() });
        out.write(Box::into_raw(boxed));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `g` must come from [`cayley_group_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cayley_group_free(g: *mut CayleyGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cayley_group_order(g: *const CayleyGroup, out: *mut usize) -> CayleyStatus {
    guard(|| write(out, handle(g)?.group.order(), "out"))
}

/// Index of the product `a·b`.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cayley_group_multiply(g: *const CayleyGroup, a: usize, b: usize, out: *mut usize) -> CayleyStatus {
    guard(|| {
        let h = handle(g)?;
        let n = h.group.order();
        if a >= n || b >= n {
            return Err((CayleyStatus::InvalidArgument, format!("element index out of range for order {n}")));
        }
        write(out, h.group.multiply(a, b), "out")
    })
}

/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cayley_group_class_count(g: *const CayleyGroup, out: *mut usize) -> CayleyStatus {
    guard(|| write(out, handle(g)?.group.conjugacy_classes().len(), "out"))
}

/// Sorted irreducible degrees. `*len` always receives the number of
/// degrees; if `capacity` is too small nothing is copied and
/// `CAYLEY_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `g` must be a live handle, `len` valid, and `buf` valid for `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn cayley_irrep_degrees(
    g: *const CayleyGroup,
    buf: *mut usize,
    capacity: usize,
    len: *mut usize,
) -> CayleyStatus {
    guard(|| {
        let degrees = &core(handle(g)?.spectrum())?.degrees;
        write(len, degrees.len(), "len")?;
        if capacity < degrees.len() {
            return Err((CayleyStatus::BufferTooSmall, format!("need room for {} degrees", degrees.len())));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        ptr::copy_nonoverlapping(degrees.as_ptr(), buf, degrees.len());
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cayley_bounds(g: *const CayleyGroup, out: *mut CayleyBounds) -> CayleyStatus {
    guard(|| {
        let h = handle(g)?;
        let r = core(bounds_report(&h.group, core(h.spectrum())?))?;
        let b = CayleyBounds {
            n: r.n,
            sigma: r.sigma,
            v: r.v,
            w_certificate: r.w_certificate,
            s_norm: r.s_norm,
            m: r.m_of_g,
            s_star: r.s_star,
        };
        write(out, b, "out")
    })
}

/// Monte Carlo estimate of the expected spectral norm.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cayley_estimate_norm(
    g: *const CayleyGroup,
    method: CayleyMethod,
    trials: usize,
    seed: u64,
    out: *mut CayleyEstimate,
) -> CayleyStatus {
    guard(|| {
        let h = handle(g)?;
        let method = match method {
            CayleyMethod::DirectReal => Method::DirectReal,
            CayleyMethod::DirectComplex => Method::DirectComplex,
            CayleyMethod::Block => Method::Block,
        };
        let spectrum = match method {
            Method::Block => Some(core(h.spectrum())?),
            _ => None,
        };
        let est = core(estimate_expected_norm(&series_for(&h.group, method), trials, method, spectrum, seed))?;
        write(out, CayleyEstimate { mean: est.mean, std_error: est.std_error, trials: est.trials }, "out")
    })
}

/// Searches for a sign vector with small `‖Σ ε_g ρ(g)‖`. `signs` must hold
/// one entry per group element and receives `±1` values; `norm` receives
/// the achieved norm.
///
/// # Safety
/// `g` must be a live handle, `signs` valid for `capacity` writes and `norm` valid.
#[no_mangle]
pub unsafe extern "C" fn cayley_spencer(
    g: *const CayleyGroup,
    method: CayleySpencerMethod,
    budget: usize,
    seed: u64,
    signs: *mut i8,
    capacity: usize,
    norm: *mut f64,
) -> CayleyStatus {
    guard(|| {
        let h = handle(g)?;
        let n = h.group.order();
        if capacity < n {
            return Err((CayleyStatus::BufferTooSmall, format!("need room for {n} signs")));
        }
        if signs.is_null() {
            return Err(null("signs"));
        }
        if norm.is_null() {
            return Err(null("norm"));
        }
        let method = match method {
            CayleySpencerMethod::BruteForce => SpencerMethod::BruteForce,
            CayleySpencerMethod::RandomBestOfK => SpencerMethod::RandomBestOfK,
            CayleySpencerMethod::LocalSearch => SpencerMethod::LocalSearch,
            CayleySpencerMethod::AbelianReduction => SpencerMethod::AbelianReduction,
        };
        let c = core(spencer::search(&h.group, method, budget, seed))?;
        ptr::copy_nonoverlapping(c.signs.as_ptr(), signs, n);
        norm.write(c.norm);
        Ok(())
    })
}
