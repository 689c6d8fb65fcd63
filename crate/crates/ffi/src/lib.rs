//! C ABI over the `tube-rupture` library.
//!
//! Every fallible call returns a [`TrStatus`]; on failure the message is kept
//! per thread and can be read with [`tr_last_error_message`]. Trajectories are
//! opaque handles released with [`tr_trajectory_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tube_rupture::integrator::{integrate, IntegratorConfig, Termination, Trajectory};
use tube_rupture::invariant::eval_sampled;
use tube_rupture::rupture::{predict, tau_rupt_closed};
use tube_rupture::{Driver, Error, SystemParams};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrStatus {
    Ok = 0,
    InvalidArgument = 1,
    /// Outside the domain of the closed-form prediction (ε = 0, z0 = 0, no extremum).
    AnalyticDomain = 2,
    NumericFailure = 3,
    NullPointer = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrDriver {
    SecondOrder = 0,
    Exact = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrTermination {
    ReachedEnd = 0,
    BlowUp = 1,
    StepCollapse = 2,
    DriverNonPositive = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrParams {
    pub y0: f64,
    pub eps: f64,
    pub z0: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrPrediction {
    pub c_const: f64,
    pub phi_crit: f64,
    pub n_crit: f64,
    pub tau_rupt: f64,
    pub r_star: f64,
    pub z_at_rupture: f64,
    pub p_at_rupture: f64,
    /// `y0 (y0 − C^{1/3})`; the prediction is inside its validity region when below 1.
    pub validity_value: f64,
    pub valid: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrIntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub blowup_threshold: f64,
    pub driver: TrDriver,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrSample {
    pub n: i64,
    pub tau: f64,
    pub y: f64,
    pub yp: f64,
    pub ypp: f64,
    pub z: f64,
    pub p: f64,
}

/// Opaque integration result.
pub struct TrTrajectory {
    inner: Trajectory,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: TrStatus, msg: &str) -> TrStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> TrStatus {
    if e.is_analytic_domain() {
        TrStatus::AnalyticDomain
    } else {
        match e {
            Error::InvalidParams(_) | Error::InvalidConfig(_) => TrStatus::InvalidArgument,
            _ => TrStatus::NumericFailure,
        }
    }
}

fn guard(f: impl FnOnce() -> Result<(), Error>) -> TrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TrStatus::Ok
        }
        Ok(Err(e)) => fail(status_of(&e), &format!("{}: {e}", e.kind())),
        Err(_) => fail(TrStatus::Panic, "internal panic"),
    }
}

fn params_from(p: &TrParams) -> Result<SystemParams, Error> {
    SystemParams::new(p.y0, p.eps, p.z0)
}

impl From<IntegratorConfig> for TrIntegratorConfig {
    fn from(c: IntegratorConfig) -> Self {
        TrIntegratorConfig {
            rel_tol: c.rel_tol,
            abs_tol: c.abs_tol,
            h_init: c.h_init,
            h_min: c.h_min,
            blowup_threshold: c.blowup_threshold,
            driver: match c.driver {
                Driver::SecondOrder => TrDriver::SecondOrder,
                Driver::Exact => TrDriver::Exact,
            },
        }
    }
}

impl From<&TrIntegratorConfig> for IntegratorConfig {
    fn from(c: &TrIntegratorConfig) -> Self {
        IntegratorConfig {
            rel_tol: c.rel_tol,
            abs_tol: c.abs_tol,
            h_init: c.h_init,
            h_min: c.h_min,
            blowup_threshold: c.blowup_threshold,
            driver: match c.driver {
                TrDriver::SecondOrder => Driver::SecondOrder,
                TrDriver::Exact => Driver::Exact,
            },
            record_dense: false,
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or an empty string. The
/// pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn tr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `out` must be null or point to writable memory for one `TrIntegratorConfig`.
#[no_mangle]
pub unsafe extern "C" fn tr_default_config(out: *mut TrIntegratorConfig) -> TrStatus {
    if out.is_null() {
        return fail(TrStatus::NullPointer, "out is null");
    }
    *out = IntegratorConfig::default().into();
    TrStatus::Ok
}

/// Closed-form rupture prediction.
///
/// # Safety
/// `params` must be null or valid for reads; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tr_predict(params: *const TrParams, out: *mut TrPrediction) -> TrStatus {
    if params.is_null() || out.is_null() {
        return fail(TrStatus::NullPointer, "params or out is null");
    }
    let p = *params;
    guard(|| {
        let r = predict(&params_from(&p)?)?;
        *out = TrPrediction {
            c_const: r.c_const,
            phi_crit: r.phi_crit,
            n_crit: r.n_crit,
            tau_rupt: r.tau_rupt,
            r_star: r.r_star,
            z_at_rupture: r.z_at_rupture,
            p_at_rupture: r.p_at_rupture,
            validity_value: r.validity.value,
            valid: r.valid,
        };
        Ok(())
    })
}

/// # Safety
/// `params` must be null or valid for reads; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tr_tau_rupt_closed(params: *const TrParams, out: *mut f64) -> TrStatus {
    if params.is_null() || out.is_null() {
        return fail(TrStatus::NullPointer, "params or out is null");
    }
    let p = *params;
    guard(|| {
        *out = tau_rupt_closed(&params_from(&p)?)?;
        Ok(())
    })
}

/// Sampled invariant `I_s(z, p, n)`.
#[no_mangle]
pub extern "C" fn tr_invariant_sampled(z: f64, p: f64, n: i64, y0: f64, eps: f64) -> f64 {
    eval_sampled(z, p, n, y0, eps)
}

/// Integrate from the initial condition to `tau_end`. `config` may be null for
/// defaults. On success `*out` owns a handle to free with `tr_trajectory_free`.
///
/// # Safety
/// `params` must be valid for reads, `config` null or valid for reads, `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tr_integrate(
    params: *const TrParams,
    config: *const TrIntegratorConfig,
    tau_end: f64,
    out: *mut *mut TrTrajectory,
) -> TrStatus {
    if params.is_null() || out.is_null() {
        return fail(TrStatus::NullPointer, "params or out is null");
    }
    *out = ptr::null_mut();
    let p = *params;
    let cfg = if config.is_null() { IntegratorConfig::default() } else { (&*config).into() };
    guard(|| {
        let traj = integrate(&params_from(&p)?, &cfg, tau_end)?;
        *out = Box::into_raw(Box::new(TrTrajectory { inner: traj }));
        Ok(())
    })
}

/// # Safety
/// `traj` must come from `tr_integrate`; the out pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn tr_trajectory_termination(
    traj: *const TrTrajectory,
    kind: *mut TrTermination,
    tau: *mut f64,
) -> TrStatus {
    let Some(t) = traj.as_ref() else {
        return fail(TrStatus::NullPointer, "traj is null");
    };
    let (k, at) = match t.inner.termination {
        Termination::ReachedEnd => (TrTermination::ReachedEnd, t.inner.last.tau),
        Termination::BlowUp(x) => (TrTermination::BlowUp, x),
        Termination::StepCollapse(x) => (TrTermination::StepCollapse, x),
        Termination::DriverNonPositive(x) => (TrTermination::DriverNonPositive, x),
    };
    if !kind.is_null() {
        *kind = k;
    }
    if !tau.is_null() {
        *tau = at;
    }
    TrStatus::Ok
}

/// Number of recorded grid samples `τ = nπ` (0 for a null handle).
///
/// # Safety
/// `traj` must be null or come from `tr_integrate`.
#[no_mangle]
pub unsafe extern "C" fn tr_trajectory_sample_count(traj: *const TrTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.inner.samples.len())
}

/// # Safety
/// `traj` must come from `tr_integrate`; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tr_trajectory_sample(
    traj: *const TrTrajectory,
    index: usize,
    out: *mut TrSample,
) -> TrStatus {
    let (Some(t), false) = (traj.as_ref(), out.is_null()) else {
        return fail(TrStatus::NullPointer, "traj or out is null");
    };
    let Some(s) = t.inner.samples.get(index) else {
        return fail(
            TrStatus::InvalidArgument,
            &format!("sample index {index} out of range (count {})", t.inner.samples.len()),
        );
    };
    let st = s.state;
    *out = TrSample { n: s.n, tau: st.tau, y: st.y, yp: st.yp, ypp: st.ypp, z: st.z, p: st.p };
    TrStatus::Ok
}

/// # Safety
/// `traj` must be null or a handle from `tr_integrate` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tr_trajectory_free(traj: *mut TrTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}
