//! C ABI for `unruh-decoherence`.
//!
//! Handles are opaque: create a [`UdContext`] (unit system plus last-error
//! slot) with `ud_context_new`, pass it to every call, and release it with
//! `ud_context_free`. Monte Carlo ensembles are a second handle type,
//! [`UdEnsemble`]. Every fallible call returns a [`UdStatus`] and writes its
//! result through an out-pointer; on failure the message is available from
//! `ud_context_last_error` until the next call on the same context.

use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use unruh_decoherence::dce::{check_mirror, MirrorParams};
use unruh_decoherence::decoherence::{
    fit_constant, phase_variance, spectral_prefactor, trajectory_integral_g, DecoherenceInput,
    Method,
};
use unruh_decoherence::montecarlo::{momentum_walk, phase_walk, McConfig};
use unruh_decoherence::radiation::{mean_occupation, SphereOptics};
use unruh_decoherence::units::unruh_temperature;
use unruh_decoherence::worldline::{tau1, TrajectoryParams};
use unruh_decoherence::{Error, PhysicalConstants};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UdStatus {
    Ok = 0,
    NullPointer = 1,
    DomainError = 2,
    NumericError = 3,
    InvalidArgument = 4,
    Panic = 5,
}

/// Values accepted by the `method` argument of `ud_phase_variance`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UdMethod {
    Closed = 0,
    Exact = 1,
}

/// Opaque: unit system and last error message.
pub struct UdContext {
    constants: PhysicalConstants,
    last_error: CString,
}

/// Opaque: a configured Monte Carlo ensemble.
pub struct UdEnsemble {
    config: McConfig,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UdKinematicState {
    pub tau: f64,
    pub gamma: f64,
    pub velocity: f64,
    pub speed_abs: f64,
    pub x: f64,
    pub segment: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UdDecoherenceResult {
    pub delta_phi_sq: f64,
    pub delta_phi_tot: f64,
    pub x: f64,
    pub theta1: f64,
    pub prefactor: f64,
    pub clausius_mossotti: f64,
    pub dipole_ok: bool,
    pub kr_small: bool,
    pub horizon_ok: bool,
    pub unruh_regime: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UdMcResult {
    pub mean_dp_sq: f64,
    pub std_error: f64,
    pub analytic: f64,
    pub z_score: f64,
    pub mean_events: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UdPhaseWalkResult {
    pub phase_std: f64,
    pub prediction: f64,
    /// NaN when nothing scatters.
    pub phase_ratio: f64,
    pub theory_ratio: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UdMirrorReport {
    pub alpha_sq: f64,
    pub rate: f64,
    pub ra_over_c2: f64,
    pub bound_exact: f64,
    pub bound_estimate: f64,
    pub coherent_exact: bool,
    pub coherent_estimate: bool,
    pub high_velocity: bool,
}

impl UdContext {
    fn set_error(&mut self, msg: &str) {
        self.last_error = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    }
}

fn status_of(e: &Error) -> UdStatus {
    match e {
        Error::Domain(_) => UdStatus::DomainError,
        Error::Quadrature { .. } => UdStatus::NumericError,
    }
}

/// Runs `body` against a live context, recording errors and catching panics.
///
/// # Safety
/// `ctx` must be null or a pointer from `ud_context_new*` not yet freed.
unsafe fn with_context<T>(
    ctx: *mut UdContext,
    out: *mut T,
    body: impl FnOnce(&PhysicalConstants) -> Result<T, Error>,
) -> UdStatus {
    let Some(ctx) = ctx.as_mut() else {
        return UdStatus::NullPointer;
    };
    ctx.set_error("");
    if out.is_null() {
        ctx.set_error("output pointer is null");
        return UdStatus::NullPointer;
    }
    let constants = ctx.constants;
    match catch_unwind(AssertUnwindSafe(|| body(&constants))) {
        Ok(Ok(value)) => {
            out.write(value);
            UdStatus::Ok
        }
        Ok(Err(e)) => {
            ctx.set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            ctx.set_error("internal panic");
            UdStatus::Panic
        }
    }
}

fn new_context(constants: PhysicalConstants) -> *mut UdContext {
    Box::into_raw(Box::new(UdContext {
        constants,
        last_error: CString::default(),
    }))
}

/// New context in SI units, or `c = ħ = k_B = 1` when `natural_units`.
#[no_mangle]
pub extern "C" fn ud_context_new(natural_units: bool) -> *mut UdContext {
    new_context(PhysicalConstants::for_mode(natural_units))
}

/// New context with custom constants; NULL unless all three are positive.
#[no_mangle]
pub extern "C" fn ud_context_new_custom(c: f64, hbar: f64, kb: f64) -> *mut UdContext {
    PhysicalConstants::new(c, hbar, kb).map_or(std::ptr::null_mut(), new_context)
}

/// # Safety
/// `ctx` must be null or a pointer from `ud_context_new*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ud_context_free(ctx: *mut UdContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Last error message, empty after a successful call. Owned by `ctx`.
///
/// # Safety
/// `ctx` must be null or a live context.
#[no_mangle]
pub unsafe extern "C" fn ud_context_last_error(ctx: *const UdContext) -> *const c_char {
    match ctx.as_ref() {
        Some(c) => c.last_error.as_ptr(),
        None => c"null context".as_ptr(),
    }
}

#[no_mangle]
pub extern "C" fn ud_version() -> *const c_char {
    static VERSION: &std::ffi::CStr = c"0.1.0";
    VERSION.as_ptr()
}

/// # Safety
/// `ctx` must be a live context and `out` a valid pointer to a double.
#[no_mangle]
pub unsafe extern "C" fn ud_unruh_temperature(
    ctx: *mut UdContext,
    a: f64,
    out: *mut f64,
) -> UdStatus {
    with_context(ctx, out, |c| unruh_temperature(a, c))
}

/// # Safety
/// `ctx` must be a live context and `out` a valid pointer to a double.
#[no_mangle]
pub unsafe extern "C" fn ud_tau1(
    ctx: *mut UdContext,
    a: f64,
    radius: f64,
    out: *mut f64,
) -> UdStatus {
    with_context(ctx, out, |c| tau1(a, radius, c))
}

/// # Safety
/// `ctx` must be a live context and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ud_kinematics(
    ctx: *mut UdContext,
    a: f64,
    radius: f64,
    tau: f64,
    out: *mut UdKinematicState,
) -> UdStatus {
    with_context(ctx, out, |c| {
        let s = TrajectoryParams::new(a, radius, *c)?.kinematics(tau)?;
        Ok(UdKinematicState {
            tau: s.tau,
            gamma: s.gamma,
            velocity: s.velocity,
            speed_abs: s.speed_abs,
            x: s.x,
            segment: s.segment as u32,
        })
    })
}

/// Dimensionless trajectory integral `G(θ₁)`.
///
/// # Safety
/// `ctx` must be a live context and `out` a valid pointer to a double.
#[no_mangle]
pub unsafe extern "C" fn ud_trajectory_integral(
    ctx: *mut UdContext,
    theta1: f64,
    out: *mut f64,
) -> UdStatus {
    with_context(ctx, out, |_| Ok(trajectory_integral_g(theta1)?.value))
}

/// # Safety
/// `ctx` must be a live context and `out` a valid pointer to a double.
#[no_mangle]
pub unsafe extern "C" fn ud_mean_occupation(
    ctx: *mut UdContext,
    omega: f64,
    a: f64,
    out: *mut f64,
) -> UdStatus {
    with_context(ctx, out, |c| mean_occupation(omega, a, c))
}

/// `method` takes a `UdMethod` value.
///
/// # Safety
/// `ctx` must be a live context and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ud_phase_variance(
    ctx: *mut UdContext,
    a: f64,
    radius: f64,
    epsilon: f64,
    method: u32,
    out: *mut UdDecoherenceResult,
) -> UdStatus {
    let method = match method {
        m if m == UdMethod::Closed as u32 => Method::ClosedForm,
        m if m == UdMethod::Exact as u32 => Method::ExactQuadrature,
        _ => {
            if let Some(c) = ctx.as_mut() {
                c.set_error(&format!("unknown method {method}"));
            }
            return UdStatus::InvalidArgument;
        }
    };
    with_context(ctx, out, |c| {
        let input = DecoherenceInput::new(a, SphereOptics::new(epsilon, radius, None)?, *c)?;
        let r = phase_variance(&input, method)?;
        Ok(UdDecoherenceResult {
            delta_phi_sq: r.delta_phi_sq,
            delta_phi_tot: r.delta_phi_tot,
            x: r.groups.x,
            theta1: r.groups.theta1,
            prefactor: r.prefactor,
            clausius_mossotti: r.clausius_mossotti,
            dipole_ok: r.flags.dipole_ok,
            kr_small: r.flags.kr_small,
            horizon_ok: r.flags.horizon_ok,
            unruh_regime: r.flags.unruh_regime,
        })
    })
}

/// Relative least-squares fit of `G(θ)² ≈ C θ sinh⁴θ` over `grid[0..len]`.
/// Writes `[C, max relative deviation]` to `out`.
///
/// # Safety
/// `grid` must point to `len` doubles; `out` to two writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ud_fit_constant(
    ctx: *mut UdContext,
    grid: *const f64,
    len: usize,
    out: *mut [f64; 2],
) -> UdStatus {
    if grid.is_null() {
        if let Some(c) = ctx.as_mut() {
            c.set_error("grid pointer is null");
        }
        return UdStatus::NullPointer;
    }
    let points = std::slice::from_raw_parts(grid, len);
    with_context(ctx, out, |_| {
        let r = fit_constant(points)?;
        Ok([r.c_best, r.max_rel_dev])
    })
}

/// Writes `[prefactor, J by quadrature, J by zeta series]` to `out`.
///
/// # Safety
/// `out` must point to three writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ud_spectral_prefactor(
    ctx: *mut UdContext,
    out: *mut [f64; 3],
) -> UdStatus {
    with_context(ctx, out, |_| {
        let p = spectral_prefactor()?;
        Ok([p.prefactor, p.j_quadrature, p.j_series])
    })
}

/// Mirror check for the dynamical-Casimir comparison.
///
/// # Safety
/// `ctx` must be a live context and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ud_dce_check(
    ctx: *mut UdContext,
    mass: f64,
    omega0: f64,
    amplitude: f64,
    half_periods: u32,
    out: *mut UdMirrorReport,
) -> UdStatus {
    with_context(ctx, out, |c| {
        let r = check_mirror(
            &MirrorParams::new(mass, omega0, amplitude, half_periods)?,
            c,
        );
        Ok(UdMirrorReport {
            alpha_sq: r.alpha_sq,
            rate: r.rate,
            ra_over_c2: r.ra_over_c2,
            bound_exact: r.bound.exact_threshold,
            bound_estimate: r.bound.estimate_threshold,
            coherent_exact: r.coherent_exact,
            coherent_estimate: r.coherent_estimate,
            high_velocity: r.high_velocity,
        })
    })
}

/// New ensemble whose quantization volume gives `mean_events` scatterings
/// on average over `tau`. NULL on invalid input (message in `ctx`).
///
/// # Safety
/// `ctx` must be a live context.
#[no_mangle]
pub unsafe extern "C" fn ud_ensemble_new(
    ctx: *mut UdContext,
    seed: u64,
    n_realizations: usize,
    k: f64,
    a: f64,
    radius: f64,
    epsilon: f64,
    tau: f64,
    mean_events: f64,
) -> *mut UdEnsemble {
    let mut slot = std::mem::MaybeUninit::<McConfig>::uninit();
    let status = with_context(ctx, slot.as_mut_ptr(), |c| {
        let input = DecoherenceInput::new(a, SphereOptics::new(epsilon, radius, None)?, *c)?;
        McConfig::with_mean_events(seed, n_realizations, k, input, tau, mean_events)
    });
    if status == UdStatus::Ok {
        Box::into_raw(Box::new(UdEnsemble {
            config: slot.assume_init(),
        }))
    } else {
        std::ptr::null_mut()
    }
}

/// # Safety
/// `ensemble` must be null or a pointer from `ud_ensemble_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ud_ensemble_free(ensemble: *mut UdEnsemble) {
    if !ensemble.is_null() {
        drop(Box::from_raw(ensemble));
    }
}

/// # Safety
/// `ctx` and `ensemble` must be live handles; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ud_ensemble_momentum_walk(
    ctx: *mut UdContext,
    ensemble: *const UdEnsemble,
    tau: f64,
    out: *mut UdMcResult,
) -> UdStatus {
    let Some(ensemble) = ensemble.as_ref() else {
        return null_handle(ctx);
    };
    with_context(ctx, out, |_| {
        let r = momentum_walk(&ensemble.config, tau)?;
        Ok(UdMcResult {
            mean_dp_sq: r.mean_dp_sq,
            std_error: r.stderr,
            analytic: r.analytic,
            z_score: r.z_score,
            mean_events: r.mean_events,
        })
    })
}

/// # Safety
/// `ctx` and `ensemble` must be live handles; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ud_ensemble_phase_walk(
    ctx: *mut UdContext,
    ensemble: *const UdEnsemble,
    out: *mut UdPhaseWalkResult,
) -> UdStatus {
    let Some(ensemble) = ensemble.as_ref() else {
        return null_handle(ctx);
    };
    with_context(ctx, out, |_| {
        let r = phase_walk(&ensemble.config)?;
        Ok(UdPhaseWalkResult {
            phase_std: r.phase_std,
            prediction: r.prediction,
            phase_ratio: r.phase_ratio.unwrap_or(f64::NAN),
            theory_ratio: r.theory_ratio,
        })
    })
}

unsafe fn null_handle(ctx: *mut UdContext) -> UdStatus {
    if let Some(c) = ctx.as_mut() {
        c.set_error("ensemble handle is null");
    }
    UdStatus::NullPointer
}
