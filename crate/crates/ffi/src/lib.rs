//! C ABI for the twinbeam library.
//!
//! Every fallible call returns a [`TbStatus`]; on failure a message is kept
//! per thread and can be read with [`tb_last_error`]. Objects are opaque and
//! must be released with their matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use twinbeam::analysis::{
    compute_trace, detect_events, separability_at, CrossingKind, EntanglementEvents, SeparabilityTrace,
};
use twinbeam::gaussian::CovarianceMatrix;
use twinbeam::kernels;
use twinbeam::params::{validate, GridConfig, PhysicalConfig, SecularForm, ValidatedConfig};
use twinbeam::separability::simon_separability;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidConfig = 2,
    OutOfRange = 3,
    Numerical = 4,
    Panic = 5,
}

pub const TB_SECULAR_DERIVED: c_int = 0;
pub const TB_SECULAR_AS_PRINTED: c_int = 1;

/// Validated physical and grid configuration.
pub struct TbConfig(ValidatedConfig);

/// Sampled separability function.
pub struct TbTrace(SeparabilityTrace);

/// Detected deaths and revivals.
pub struct TbEvents(EntanglementEvents);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct TbEventSummary {
    /// 1 when a death was found, then `tau_dis` holds its time.
    pub has_tau_dis: c_int,
    pub tau_dis: f64,
    pub n_crossings: usize,
    pub n_revivals: usize,
    pub n_touches: usize,
    pub survived: c_int,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: TbStatus, msg: impl Into<String>) -> TbStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> TbStatus) -> TbStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(TbStatus::Panic, format!("panic: {msg}"))
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the most recent failure on this thread, or NULL.
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn tb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Build and validate a configuration. `secular_form` is one of the
/// `TB_SECULAR_*` constants.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn tb_config_new(
    r: f64,
    x1: f64,
    x2: f64,
    alpha: f64,
    temperature_ratio: f64,
    tau_max: f64,
    dtau: f64,
    refine_tol: f64,
    secular_form: c_int,
    out: *mut *mut TbConfig,
) -> TbStatus {
    guard(|| {
        if out.is_null() {
            return fail(TbStatus::NullPointer, "out is null");
        }
        let form = match secular_form {
            TB_SECULAR_DERIVED => SecularForm::Derived,
            TB_SECULAR_AS_PRINTED => SecularForm::AsPrinted,
            other => return fail(TbStatus::InvalidConfig, format!("unknown secular form {other}")),
        };
        let physical = PhysicalConfig::new(r, x1, x2)
            .with_alpha(alpha)
            .with_temperature_ratio(temperature_ratio)
            .with_secular_form(form);
        match validate(&physical, &GridConfig::new(tau_max, dtau, refine_tol)) {
            Ok(cfg) => {
                unsafe { *out = Box::into_raw(Box::new(TbConfig(cfg))) };
                TbStatus::Ok
            }
            Err(e) => fail(TbStatus::InvalidConfig, e.to_string()),
        }
    })
}

/// Number of configuration warnings (squeezing outside the studied band,
/// temperature too low for the high-temperature forms).
///
/// # Safety
/// `config` must be NULL or a pointer returned by [`tb_config_new`].
#[no_mangle]
pub unsafe extern "C" fn tb_config_warning_count(config: *const TbConfig) -> usize {
    unsafe { config.as_ref() }.map_or(0, |c| c.0.warnings.len())
}

/// # Safety
/// `config` must be NULL or a pointer returned by [`tb_config_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tb_config_free(config: *mut TbConfig) {
    if !config.is_null() {
        drop(unsafe { Box::from_raw(config) });
    }
}

/// `S(τ)` evaluated directly at one time.
///
/// # Safety
/// `config` must come from [`tb_config_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tb_separability_at(config: *const TbConfig, tau: f64, out: *mut f64) -> TbStatus {
    guard(|| {
        let (Some(cfg), false) = (unsafe { config.as_ref() }, out.is_null()) else {
            return fail(TbStatus::NullPointer, "config or out is null");
        };
        if !(tau >= 0.0 && tau.is_finite()) {
            return fail(
                TbStatus::OutOfRange,
                format!("tau must be finite and non-negative, got {tau}"),
            );
        }
        match separability_at(&cfg.0, tau) {
            Ok(s) => {
                unsafe { *out = s };
                TbStatus::Ok
            }
            Err(e) => fail(TbStatus::Numerical, e.to_string()),
        }
    })
}

/// Separability function of a 4×4 covariance matrix in row-major order
/// with quadratures `(x1, p1, x2, p2)`.
///
/// # Safety
/// `sigma` must point to 16 readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tb_simon_separability(sigma: *const f64, out: *mut f64) -> TbStatus {
    guard(|| {
        if sigma.is_null() || out.is_null() {
            return fail(TbStatus::NullPointer, "sigma or out is null");
        }
        let flat = unsafe { std::slice::from_raw_parts(sigma, 16) };
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row.copy_from_slice(&flat[4 * i..4 * i + 4]);
        }
        unsafe { *out = simon_separability(&CovarianceMatrix::from_matrix(&m)) };
        TbStatus::Ok
    })
}

/// Sample `S(τ)` on the configuration's grid.
///
/// # Safety
/// `config` must come from [`tb_config_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tb_trace_compute(config: *const TbConfig, out: *mut *mut TbTrace) -> TbStatus {
    guard(|| {
        let (Some(cfg), false) = (unsafe { config.as_ref() }, out.is_null()) else {
            return fail(TbStatus::NullPointer, "config or out is null");
        };
        match compute_trace(&cfg.0) {
            Ok(trace) => {
                unsafe { *out = Box::into_raw(Box::new(TbTrace(trace))) };
                TbStatus::Ok
            }
            Err(e) => fail(TbStatus::Numerical, e.to_string()),
        }
    })
}

/// # Safety
/// `trace` must be NULL or come from [`tb_trace_compute`].
#[no_mangle]
pub unsafe extern "C" fn tb_trace_len(trace: *const TbTrace) -> usize {
    unsafe { trace.as_ref() }.map_or(0, |t| t.0.len())
}

/// One row of the trace. Any output pointer may be NULL.
///
/// # Safety
/// `trace` must come from [`tb_trace_compute`]; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn tb_trace_sample(
    trace: *const TbTrace,
    index: usize,
    tau: *mut f64,
    s: *mut f64,
    gamma1: *mut f64,
    gamma2: *mut f64,
    physical: *mut c_int,
) -> TbStatus {
    guard(|| {
        let Some(t) = (unsafe { trace.as_ref() }) else {
            return fail(TbStatus::NullPointer, "trace is null");
        };
        let t = &t.0;
        if index >= t.len() {
            return fail(
                TbStatus::OutOfRange,
                format!("index {index} out of range for {} samples", t.len()),
            );
        }
        unsafe {
            if !tau.is_null() {
                *tau = t.taus[index];
            }
            if !s.is_null() {
                *s = t.s_values[index];
            }
            if !gamma1.is_null() {
                *gamma1 = t.gamma1[index];
            }
            if !gamma2.is_null() {
                *gamma2 = t.gamma2[index];
            }
            if !physical.is_null() {
                *physical = c_int::from(t.physical[index]);
            }
        }
        TbStatus::Ok
    })
}

/// Copy up to `capacity` values of `S` into `buffer`; `written` receives the count.
///
/// # Safety
/// `buffer` must hold `capacity` doubles; `written` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn tb_trace_copy_s(
    trace: *const TbTrace,
    buffer: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> TbStatus {
    guard(|| {
        let Some(t) = (unsafe { trace.as_ref() }) else {
            return fail(TbStatus::NullPointer, "trace is null");
        };
        if buffer.is_null() && capacity > 0 {
            return fail(TbStatus::NullPointer, "buffer is null");
        }
        let n = capacity.min(t.0.len());
        if n > 0 {
            unsafe { std::slice::from_raw_parts_mut(buffer, n) }.copy_from_slice(&t.0.s_values[..n]);
        }
        if !written.is_null() {
            unsafe { *written = n };
        }
        TbStatus::Ok
    })
}

/// # Safety
/// `trace` must be NULL or come from [`tb_trace_compute`] and not yet be freed.
#[no_mangle]
pub unsafe extern "C" fn tb_trace_free(trace: *mut TbTrace) {
    if !trace.is_null() {
        drop(unsafe { Box::from_raw(trace) });
    }
}

/// Detect deaths and revivals, refining each to the configured tolerance.
///
/// # Safety
/// `trace` must come from [`tb_trace_compute`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tb_events_detect(trace: *const TbTrace, out: *mut *mut TbEvents) -> TbStatus {
    guard(|| {
        let (Some(t), false) = (unsafe { trace.as_ref() }, out.is_null()) else {
            return fail(TbStatus::NullPointer, "trace or out is null");
        };
        match detect_events(&t.0, t.0.config.grid.refine_tol) {
            Ok(ev) => {
                unsafe { *out = Box::into_raw(Box::new(TbEvents(ev))) };
                TbStatus::Ok
            }
            Err(e) => fail(TbStatus::Numerical, e.to_string()),
        }
    })
}

/// # Safety
/// `events` must come from [`tb_events_detect`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tb_events_summary(events: *const TbEvents, out: *mut TbEventSummary) -> TbStatus {
    guard(|| {
        let (Some(ev), false) = (unsafe { events.as_ref() }, out.is_null()) else {
            return fail(TbStatus::NullPointer, "events or out is null");
        };
        let ev = &ev.0;
        unsafe {
            *out = TbEventSummary {
                has_tau_dis: c_int::from(ev.tau_dis.is_some()),
                tau_dis: ev.tau_dis.unwrap_or(f64::NAN),
                n_crossings: ev.crossings.len(),
                n_revivals: ev.n_revivals,
                n_touches: ev.touches.len(),
                survived: c_int::from(ev.survived),
            }
        };
        TbStatus::Ok
    })
}

/// Time of crossing `index`; `is_death` is 1 for a death, 0 for a revival.
///
/// # Safety
/// `events` must come from [`tb_events_detect`]; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn tb_events_crossing(
    events: *const TbEvents,
    index: usize,
    tau: *mut f64,
    is_death: *mut c_int,
) -> TbStatus {
    guard(|| {
        let Some(ev) = (unsafe { events.as_ref() }) else {
            return fail(TbStatus::NullPointer, "events is null");
        };
        let Some(c) = ev.0.crossings.get(index) else {
            return fail(
                TbStatus::OutOfRange,
                format!("crossing {index} out of range for {}", ev.0.crossings.len()),
            );
        };
        unsafe {
            if !tau.is_null() {
                *tau = c.tau;
            }
            if !is_death.is_null() {
                *is_death = c_int::from(c.kind == CrossingKind::Death);
            }
        }
        TbStatus::Ok
    })
}

/// # Safety
/// `events` must be NULL or come from [`tb_events_detect`] and not yet be freed.
#[no_mangle]
pub unsafe extern "C" fn tb_events_free(events: *mut TbEvents) {
    if !events.is_null() {
        drop(unsafe { Box::from_raw(events) });
    }
}

/// Diffusion coefficient `Δ(τ)` for an oscillator of frequency `freq` (units of the cut-off).
#[no_mangle]
pub extern "C" fn tb_delta(tau: f64, freq: f64, alpha: f64, temperature_ratio: f64) -> f64 {
    kernels::delta_coeff(tau, freq, alpha, temperature_ratio)
}

#[no_mangle]
pub extern "C" fn tb_pi(tau: f64, freq: f64, alpha: f64, temperature_ratio: f64) -> f64 {
    kernels::pi_coeff(tau, freq, alpha, temperature_ratio)
}

#[no_mangle]
pub extern "C" fn tb_gamma(tau: f64, freq: f64, alpha: f64) -> f64 {
    kernels::gamma_coeff(tau, freq, alpha)
}

/// Integrated damping `Γ(τ) = 2∫γ`.
#[no_mangle]
pub extern "C" fn tb_big_gamma(tau: f64, freq: f64, alpha: f64) -> f64 {
    kernels::big_gamma(tau, freq, alpha)
}
