use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use unruh_decoherence_ffi::*;

struct Ctx(*mut UdContext);

impl Ctx {
    fn new(natural: bool) -> Self {
        let p = ud_context_new(natural);
        assert!(!p.is_null());
        Ctx(p)
    }
    fn last_error(&self) -> String {
        unsafe { CStr::from_ptr(ud_context_last_error(self.0)) }
            .to_string_lossy()
            .into_owned()
    }
}

impl Drop for Ctx {
    fn drop(&mut self) {
        unsafe { ud_context_free(self.0) }
    }
}

#[test]
fn temperature_of_one_kelvin_acceleration() {
    let ctx = Ctx::new(false);
    let mut t = 0.0;
    let st = unsafe { ud_unruh_temperature(ctx.0, 2.46608302140261e20, &mut t) };
    assert_eq!(st, UdStatus::Ok);
    assert!((t - 1.0).abs() < 1e-12);
    assert_eq!(ctx.last_error(), "");
}

#[test]
fn domain_errors_set_message_and_clear_on_success() {
    let ctx = Ctx::new(true);
    let mut t = 0.0;
    assert_eq!(
        unsafe { ud_unruh_temperature(ctx.0, -1.0, &mut t) },
        UdStatus::DomainError
    );
    assert!(!ctx.last_error().is_empty());
    assert_eq!(t, 0.0);
    assert_eq!(
        unsafe { ud_unruh_temperature(ctx.0, 1.0, &mut t) },
        UdStatus::Ok
    );
    assert_eq!(ctx.last_error(), "");
}

#[test]
fn null_pointers_are_reported() {
    let mut t = 0.0;
    assert_eq!(
        unsafe { ud_unruh_temperature(ptr::null_mut(), 1.0, &mut t) },
        UdStatus::NullPointer
    );
    let ctx = Ctx::new(true);
    assert_eq!(
        unsafe { ud_unruh_temperature(ctx.0, 1.0, ptr::null_mut()) },
        UdStatus::NullPointer
    );
    let mut fit = [0.0; 2];
    assert_eq!(
        unsafe { ud_fit_constant(ctx.0, ptr::null(), 3, &mut fit) },
        UdStatus::NullPointer
    );
    let mut mc = UdMcResult::default();
    assert_eq!(
        unsafe { ud_ensemble_momentum_walk(ctx.0, ptr::null(), 1.0, &mut mc) },
        UdStatus::NullPointer
    );
    assert!(
        !unsafe { CStr::from_ptr(ud_context_last_error(ptr::null())) }
            .to_bytes()
            .is_empty()
    );
    unsafe {
        ud_context_free(ptr::null_mut());
        ud_ensemble_free(ptr::null_mut());
    }
}

#[test]
fn custom_context_validates_constants() {
    assert!(ud_context_new_custom(0.0, 1.0, 1.0).is_null());
    let p = ud_context_new_custom(1.0, 1.0, 1.0);
    assert!(!p.is_null());
    unsafe { ud_context_free(p) };
}

#[test]
fn kinematics_at_apex_and_turning_point() {
    let ctx = Ctx::new(true);
    let mut tau1 = 0.0;
    assert_eq!(unsafe { ud_tau1(ctx.0, 1.0, 2.0, &mut tau1) }, UdStatus::Ok);
    assert!((tau1 - 2f64.acosh()).abs() < 1e-14);
    let mut s = UdKinematicState::default();
    assert_eq!(
        unsafe { ud_kinematics(ctx.0, 1.0, 2.0, 2.0 * tau1, &mut s) },
        UdStatus::Ok
    );
    assert_eq!(s.segment, 1);
    assert!((s.x - 2.0).abs() < 1e-12);
    assert!(s.velocity.abs() < 1e-12 && (s.gamma - 1.0).abs() < 1e-12);
}

#[test]
fn trajectory_integral_matches_reference() {
    let ctx = Ctx::new(true);
    let mut g = 0.0;
    assert_eq!(
        unsafe { ud_trajectory_integral(ctx.0, 0.7, &mut g) },
        UdStatus::Ok
    );
    assert!((g / 1.302772418605839 - 1.0).abs() < 1e-11);
}

#[test]
fn mean_occupation_reference() {
    let ctx = Ctx::new(true);
    let mut n = 0.0;
    assert_eq!(
        unsafe { ud_mean_occupation(ctx.0, 1.0, 1.0, &mut n) },
        UdStatus::Ok
    );
    assert!((n / 5.61280979598194e-3 - 1.0).abs() < 1e-12);
}

#[test]
fn phase_variance_at_horizon_and_method_validation() {
    let ctx = Ctx::new(true);
    let mut r = UdDecoherenceResult::default();
    let st = unsafe {
        ud_phase_variance(
            ctx.0,
            1.0,
            1.0,
            f64::INFINITY,
            UdMethod::Exact as u32,
            &mut r,
        )
    };
    assert_eq!(st, UdStatus::Ok);
    assert!(
        (r.delta_phi_tot - 0.34623).abs() < 5e-5,
        "{}",
        r.delta_phi_tot
    );
    assert_eq!(r.x, 1.0);
    assert_eq!(r.clausius_mossotti, 1.0);

    let mut closed = UdDecoherenceResult::default();
    let st = unsafe {
        ud_phase_variance(
            ctx.0,
            1.0,
            1.0,
            f64::INFINITY,
            UdMethod::Closed as u32,
            &mut closed,
        )
    };
    assert_eq!(st, UdStatus::Ok);
    assert!((closed.delta_phi_sq / r.delta_phi_sq - 1.0).abs() < 0.015);

    assert_eq!(
        unsafe { ud_phase_variance(ctx.0, 1.0, 1.0, 4.0, 7, &mut r) },
        UdStatus::InvalidArgument
    );
    assert!(ctx.last_error().contains('7'));
    assert_eq!(
        unsafe { ud_phase_variance(ctx.0, 1.0, -1.0, 4.0, 0, &mut r) },
        UdStatus::DomainError
    );
}

#[test]
fn fit_and_prefactor() {
    let ctx = Ctx::new(true);
    let grid: Vec<f64> = (0..50)
        .map(|i| 0.5 + (1.3169578969248166 - 0.5) * (i as f64 + 0.5) / 50.0)
        .collect();
    let mut fit = [0.0; 2];
    assert_eq!(
        unsafe { ud_fit_constant(ctx.0, grid.as_ptr(), grid.len(), &mut fit) },
        UdStatus::Ok
    );
    assert!((7.25..7.40).contains(&fit[0]) && fit[1] < 0.005, "{fit:?}");
    assert_eq!(
        unsafe { ud_fit_constant(ctx.0, grid.as_ptr(), 1, &mut fit) },
        UdStatus::DomainError
    );

    let mut p = [0.0; 3];
    assert_eq!(
        unsafe { ud_spectral_prefactor(ctx.0, &mut p) },
        UdStatus::Ok
    );
    assert!((p[0] - 0.0398117566).abs() < 1e-8);
    assert!((p[1] / p[2] - 1.0).abs() < 1e-10);
}

#[test]
fn dce_unit_threshold() {
    let ctx = Ctx::new(true);
    let mut r = UdMirrorReport::default();
    assert_eq!(
        unsafe { ud_dce_check(ctx.0, 1.0, 1.0, 1.0, 1, &mut r) },
        UdStatus::Ok
    );
    assert_eq!(r.ra_over_c2, 1.0);
    assert!(r.coherent_estimate && r.coherent_exact && r.high_velocity);
    assert!((r.rate - 1.0 / (6.0 * std::f64::consts::PI)).abs() < 1e-15);
    assert_eq!(
        unsafe { ud_dce_check(ctx.0, 1.0, 1.0, 1.0, 0, &mut r) },
        UdStatus::DomainError
    );
}

#[test]
fn ensemble_walks_are_deterministic() {
    let ctx = Ctx::new(true);
    let tau = 4.0 * 2f64.acosh();
    let k = 1.0 / (2.0 * std::f64::consts::PI);
    let run = || unsafe {
        let e = ud_ensemble_new(ctx.0, 42, 2000, k, 1.0, 1.0, 4.0, tau, 50.0);
        assert!(!e.is_null(), "{}", ctx.last_error());
        let mut m = UdMcResult::default();
        assert_eq!(
            ud_ensemble_momentum_walk(ctx.0, e, tau, &mut m),
            UdStatus::Ok
        );
        let mut p = UdPhaseWalkResult::default();
        assert_eq!(ud_ensemble_phase_walk(ctx.0, e, &mut p), UdStatus::Ok);
        ud_ensemble_free(e);
        (m, p)
    };
    let (m1, p1) = run();
    let (m2, p2) = run();
    assert_eq!((m1, p1), (m2, p2));
    assert!(m1.z_score.abs() < 4.0, "{m1:?}");
    assert!((m1.mean_events - 50.0).abs() < 1e-9);
    assert!(p1.phase_ratio.is_finite() && p1.theory_ratio > 0.4);

    let bad = unsafe { ud_ensemble_new(ctx.0, 1, 0, k, 1.0, 1.0, 4.0, tau, 50.0) };
    assert!(bad.is_null());
    assert!(!ctx.last_error().is_empty());
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(ud_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn header() -> String {
    std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("include/unruh_decoherence.h"),
    )
    .unwrap()
}

#[test]
fn header_declares_every_entry_point() {
    let h = header();
    for sym in [
        "ud_context_new",
        "ud_context_new_custom",
        "ud_context_free",
        "ud_context_last_error",
        "ud_version",
        "ud_unruh_temperature",
        "ud_tau1",
        "ud_kinematics",
        "ud_trajectory_integral",
        "ud_mean_occupation",
        "ud_phase_variance",
        "ud_fit_constant",
        "ud_spectral_prefactor",
        "ud_dce_check",
        "ud_ensemble_new",
        "ud_ensemble_free",
        "ud_ensemble_momentum_walk",
        "ud_ensemble_phase_walk",
        "typedef struct UdContext UdContext",
        "UD_STATUS_DOMAIN_ERROR",
        "UD_METHOD_EXACT",
    ] {
        assert!(h.contains(sym), "header lacks {sym}");
    }
}

/// Compiles a small C program against the header and static library.
/// Skipped when no C compiler or built archive is available.
#[test]
fn c_smoke_test() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let target = std::env::var_os("CARGO_TARGET_DIR")
        .map(Into::into)
        .unwrap_or_else(|| manifest.join("../../target"));
    let profile = if cfg!(debug_assertions) {
        "debug"
    } else {
        "release"
    };
    let lib = target.join(profile).join("libunruh_decoherence_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping C smoke test");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include <math.h>
#include "unruh_decoherence.h"
int main(void) {
    UdContext *ctx = ud_context_new(true);
    UdDecoherenceResult r;
    if (ud_phase_variance(ctx, 1.0, 1.0, INFINITY, UD_METHOD_EXACT, &r) != UD_STATUS_OK) return 1;
    double t;
    if (ud_unruh_temperature(ctx, -1.0, &t) != UD_STATUS_DOMAIN_ERROR) return 2;
    if (ud_context_last_error(ctx)[0] == '\0') return 3;
    printf("%.5f\n", r.delta_phi_tot);
    ud_context_free(ctx);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "0.34623");
}
