//! Phase spread of one interferometer arm caused by Unruh momentum diffusion,
//! and its integral over the field spectrum.
//!
//! Per mode, the phase spread is `Δφ_k = k ∫ γ²|v| √(Γ_k τ) dτ`, which in the
//! scaled proper time `s = aτ/c` becomes `k c √(Γ_k c³/a³) · G(θ₁)`. `G` is
//! well fitted by `G² ≈ 7.325 θ₁ sinh⁴θ₁` for `0.5 < θ₁ < acosh(3/2)`.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, require_positive, Result};
use crate::quadrature::{integrate_with_breaks, QuadConfig, QuadResult};
use crate::radiation::{
    momentum_transfer_rate_volume, spectral_cutoff, spectral_kernel_quadrature,
    spectral_kernel_series, validity_flags, SphereOptics, MOMENTUM_TRANSFER_COEFFICIENT,
};
use crate::units::{DimensionlessGroups, PhysicalConstants};
use crate::worldline::{rindler_horizon_ok, TrajectoryParams};

/// Fitted constant in `G(θ)² ≈ C θ sinh⁴θ`.
pub const FIT_CONSTANT: f64 = 7.325;
/// Rounded spectral prefactor used by the closed-form result.
pub const CLOSED_FORM_PREFACTOR: f64 = 0.04;
/// Lower edge of the window where the fit is trusted.
pub const UNRUH_WINDOW_LOW: f64 = 0.5;

/// Upper edge `acosh(3/2)` of the fit window, i.e. `aR/c² = 1`.
pub fn unruh_window_high() -> f64 {
    1.5f64.acosh()
}

pub fn in_unruh_window(theta1: f64) -> bool {
    theta1 > UNRUH_WINDOW_LOW && theta1 < unruh_window_high()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    /// Rounded closed form with prefactor 0.04.
    #[serde(rename = "closed")]
    ClosedForm,
    /// Exact `G(θ₁)` and adaptive quadrature over the spectrum.
    #[serde(rename = "exact")]
    ExactQuadrature,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed",
            Method::ExactQuadrature => "exact",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "closed" => Ok(Method::ClosedForm),
            "exact" => Ok(Method::ExactQuadrature),
            other => Err(format!("unknown method '{other}', expected closed|exact")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceInput {
    pub a: f64,
    pub optics: SphereOptics,
    pub constants: PhysicalConstants,
}

impl DecoherenceInput {
    pub fn new(a: f64, optics: SphereOptics, constants: PhysicalConstants) -> Result<Self> {
        require_positive("acceleration", a)?;
        require_positive("radius", optics.radius)?;
        Ok(Self {
            a,
            optics,
            constants,
        })
    }

    pub fn trajectory(&self) -> TrajectoryParams {
        TrajectoryParams::new(self.a, self.optics.radius, self.constants).expect("validated input")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceFlags {
    pub dipole_ok: bool,
    pub kr_small: bool,
    pub horizon_ok: bool,
    /// `0.5 < θ₁ < acosh(3/2)`.
    pub unruh_regime: bool,
    pub heavy_sphere: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceResult {
    /// Single-arm phase variance (rad²).
    pub delta_phi_sq: f64,
    /// Two uncorrelated arms, `√2 Δφ` (rad).
    pub delta_phi_tot: f64,
    pub groups: DimensionlessGroups,
    pub flags: DecoherenceFlags,
    pub method: Method,
    /// `Δφ² / [f_ε² (1 + x/4)² (τ₁c/R) x⁹]`; NaN when `f_ε = 0`.
    pub prefactor: f64,
    pub clausius_mossotti: f64,
    /// Quadrature error estimate on `delta_phi_sq` (exact method only).
    pub quadrature_error: Option<f64>,
}

/// `γ²|v|√τ` at proper time `tau`.
pub fn integrand(tau: f64, params: &TrajectoryParams) -> Result<f64> {
    let s = params.kinematics(tau)?;
    Ok(s.gamma * s.gamma * s.speed_abs * tau.sqrt())
}

/// Scaled trajectory integrand: `cosh²(y)|tanh(y)|√s = |sinh 2y|/2 · √s`
/// with `y = s − 2jθ₁`.
fn scaled_integrand(s: f64, theta1: f64) -> f64 {
    let j = if s < theta1 {
        0.0
    } else if s < 3.0 * theta1 {
        1.0
    } else {
        2.0
    };
    let y = s - 2.0 * j * theta1;
    0.5 * (2.0 * y).sinh().abs() * s.sqrt()
}

/// `G(θ₁) = ∫₀^{4θ₁} cosh²(s−2jθ₁)|tanh(s−2jθ₁)|√s ds`.
pub fn trajectory_integral_g(theta1: f64) -> Result<QuadResult> {
    trajectory_integral_g_with(theta1, QuadConfig::relative(1e-12))
}

pub fn trajectory_integral_g_with(theta1: f64, config: QuadConfig) -> Result<QuadResult> {
    require_positive("theta1", theta1)?;
    let t = theta1;
    integrate_with_breaks(
        |s| scaled_integrand(s, t),
        &[0.0, t, 2.0 * t, 3.0 * t, 4.0 * t],
        config,
    )
}

/// Spectral density `χ(k)` of the phase variance: `Δφ_k² V · 4πk²/(2π)³`.
pub fn phase_variance_mode_density(
    k: f64,
    input: &DecoherenceInput,
    method: Method,
) -> Result<f64> {
    require_positive("k", k)?;
    let shape = match method {
        Method::ExactQuadrature => trajectory_shape_exact(input)?,
        Method::ClosedForm => trajectory_shape_closed(input),
    };
    mode_density(k, input, shape)
}

// Δφ_k²V = k² (Γ_kV) (c⁵/a³) · shape, where shape is G² or its fitted form.
fn mode_density(k: f64, input: &DecoherenceInput, shape: f64) -> Result<f64> {
    let c = input.constants.c;
    let rate = momentum_transfer_rate_volume(k, input.a, &input.optics, &input.constants)?;
    let phase_var_v = k * k * rate.gamma_k_v * c.powi(5) / input.a.powi(3) * shape;
    Ok(phase_var_v * k * k / (2.0 * PI * PI))
}

fn trajectory_shape_exact(input: &DecoherenceInput) -> Result<f64> {
    let theta1 = input.trajectory().groups().theta1;
    Ok(trajectory_integral_g(theta1)?.value.powi(2))
}

// 7.325 θ₁ sinh⁴θ₁ with sinh²θ₁ = x(1 + x/4).
fn trajectory_shape_closed(input: &DecoherenceInput) -> f64 {
    let groups = input.trajectory().groups();
    let sinh_sq = groups.x * (1.0 + groups.x / 4.0);
    FIT_CONSTANT * groups.theta1 * sinh_sq * sinh_sq
}

/// Per-mode variance `Δφ_k² V` from the closed form
/// `7.325 (Γ_kV) τ₁ (kR)² (1 + aR/4c²)²`.
pub fn closed_form_mode_variance_volume(k: f64, input: &DecoherenceInput) -> Result<f64> {
    let params = input.trajectory();
    let x = params.groups().x;
    let rate = momentum_transfer_rate_volume(k, input.a, &input.optics, &input.constants)?;
    let kr = k * input.optics.radius;
    Ok(FIT_CONSTANT * rate.gamma_k_v * params.tau1 * kr * kr * (1.0 + x / 4.0).powi(2))
}

/// Dimension-carrying scale `f_ε² (1 + x/4)² (τ₁c/R) x⁹` of the final result.
fn result_scale(input: &DecoherenceInput, groups: &DimensionlessGroups) -> f64 {
    let f = input.optics.clausius_mossotti();
    let x = groups.x;
    f * f * (1.0 + x / 4.0).powi(2) * (groups.theta1 / x) * x.powi(9)
}

/// Single-arm phase variance summed over all field modes.
pub fn phase_variance(input: &DecoherenceInput, method: Method) -> Result<DecoherenceResult> {
    let params = input.trajectory();
    let groups = params.groups();
    let optics_flags = validity_flags(&input.optics, input.a, &input.constants);
    let horizon = rindler_horizon_ok(input.a, input.optics.radius, &input.constants)?;
    let flags = DecoherenceFlags {
        dipole_ok: optics_flags.dipole_ok,
        kr_small: optics_flags.kr_small,
        horizon_ok: horizon.ok,
        unruh_regime: in_unruh_window(groups.theta1),
        heavy_sphere: optics_flags.heavy_sphere,
    };
    let scale = result_scale(input, &groups);
    let f_eps = input.optics.clausius_mossotti();

    let (delta_phi_sq, quadrature_error) = if f_eps == 0.0 {
        (0.0, None)
    } else {
        match method {
            Method::ClosedForm => (CLOSED_FORM_PREFACTOR * scale, None),
            Method::ExactQuadrature => {
                let r = spectral_integral(input)?;
                (r.value, Some(r.error))
            }
        }
    };
    Ok(DecoherenceResult {
        delta_phi_sq,
        delta_phi_tot: total_phase_uncertainty(delta_phi_sq)?,
        groups,
        flags,
        method,
        prefactor: if scale > 0.0 {
            delta_phi_sq / scale
        } else {
            f64::NAN
        },
        clausius_mossotti: f_eps,
        quadrature_error,
    })
}

/// `∫₀^∞ χ(k) dk` in the variable `u = c²k/a`, truncated where the certified
/// tail of the occupation kernel drops below 10⁻¹² of the total.
fn spectral_integral(input: &DecoherenceInput) -> Result<QuadResult> {
    let shape = trajectory_shape_exact(input)?;
    let k_scale = input.a / (input.constants.c * input.constants.c);
    let upper = spectral_cutoff(1e-12);
    let density = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        mode_density(u * k_scale, input, shape).map_or(f64::NAN, |chi| chi * k_scale)
    };
    integrate_with_breaks(
        density,
        &[0.0, 0.5, 1.0, 2.0, 4.0, upper],
        QuadConfig::relative(1e-12),
    )
}

/// `Δφ_tot = √2 Δφ` for two arms with uncorrelated fluctuations.
pub fn total_phase_uncertainty(delta_phi_sq: f64) -> Result<f64> {
    if delta_phi_sq.is_nan() || delta_phi_sq < 0.0 {
        return domain(format!("phase variance must be >= 0, got {delta_phi_sq}"));
    }
    Ok(SQRT_2 * delta_phi_sq.sqrt())
}

/// Evaluates many inputs in parallel; output order matches input order.
pub fn sweep(inputs: &[DecoherenceInput], method: Method) -> Vec<Result<DecoherenceResult>> {
    inputs
        .par_iter()
        .map(|input| phase_variance(input, method))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub c_best: f64,
    pub max_rel_dev: f64,
    pub points: usize,
    /// All grid points inside the open fit window.
    pub in_window: bool,
}

/// `n` points evenly spaced strictly inside `(0.5, acosh(3/2))`.
pub fn unruh_window_grid(n: usize) -> Vec<f64> {
    let (lo, hi) = (UNRUH_WINDOW_LOW, unruh_window_high());
    (1..=n)
        .map(|i| lo + (hi - lo) * i as f64 / (n + 1) as f64)
        .collect()
}

/// Fits `G(θ)² ≈ C θ sinh⁴θ` on an arbitrary grid of at least two points.
///
/// The fit minimizes relative residuals, so `C` is the mean of the
/// per-point ratios `G²/(θ sinh⁴θ)`.
pub fn fit_constant(grid: &[f64]) -> Result<FitReport> {
    if grid.len() < 2 {
        return domain(format!(
            "constant fit needs at least 2 grid points, got {}",
            grid.len()
        ));
    }
    let ratios = grid
        .iter()
        .map(|&theta| {
            let g = trajectory_integral_g(theta)?.value;
            Ok(g * g / (theta * theta.sinh().powi(4)))
        })
        .collect::<Result<Vec<f64>>>()?;
    let c_best = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let max_rel_dev = ratios
        .iter()
        .map(|r| (r / c_best - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(FitReport {
        c_best,
        max_rel_dev,
        points: grid.len(),
        in_window: grid.iter().all(|&t| in_unruh_window(t)),
    })
}

/// [`fit_constant`] restricted to the trusted window with at least 20 points.
pub fn fitted_constant_report(grid: &[f64]) -> Result<FitReport> {
    if grid.len() < 20 {
        return domain(format!(
            "fit report needs >= 20 grid points, got {}",
            grid.len()
        ));
    }
    if let Some(t) = grid.iter().find(|&&t| !in_unruh_window(t)) {
        return domain(format!("grid point {t} outside (0.5, acosh(3/2))"));
    }
    fit_constant(grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPrefactor {
    pub j_quadrature: f64,
    pub j_series: f64,
    /// `7.325 · (16π/3) · J / (2π²)`.
    pub prefactor: f64,
}

pub fn spectral_prefactor() -> Result<SpectralPrefactor> {
    let j_quadrature = spectral_kernel_quadrature()?.value;
    Ok(SpectralPrefactor {
        j_quadrature,
        j_series: spectral_kernel_series(),
        prefactor: FIT_CONSTANT * MOMENTUM_TRANSFER_COEFFICIENT * j_quadrature / (2.0 * PI * PI),
    })
}
