//! Unruh occupation spectrum and dipole (Rayleigh) scattering by a small
//! dielectric sphere.
//!
//! The quantization volume `V` never appears on its own: rates are carried as
//! `Γ_k·V`, and the density of states `V d³k/(2π)³` removes it again.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, require_positive, Result};
use crate::quadrature::{integrate_with_breaks, QuadConfig, QuadResult};
use crate::special::bose_moment;
use crate::units::PhysicalConstants;

/// Momentum-transfer coefficient `∫ (1+cos²θ)/2 · 2(1−cosθ) dΩ = 16π/3`.
pub const MOMENTUM_TRANSFER_COEFFICIENT: f64 = 16.0 * PI / 3.0;
/// Total dipole coefficient `∫ (1+cos²θ)/2 dΩ = 8π/3`.
pub const TOTAL_CROSS_SECTION_COEFFICIENT: f64 = 8.0 * PI / 3.0;

/// Low-frequency optical description of the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereOptics {
    /// d.c. relative permittivity; `f64::INFINITY` is the conductor limit.
    pub epsilon: f64,
    pub radius: f64,
    pub mass: Option<f64>,
}

impl SphereOptics {
    pub fn new(epsilon: f64, radius: f64, mass: Option<f64>) -> Result<Self> {
        clausius_mossotti(epsilon)?;
        require_positive("radius", radius)?;
        if let Some(m) = mass {
            require_positive("mass", m)?;
        }
        Ok(Self {
            epsilon,
            radius,
            mass,
        })
    }

    pub fn clausius_mossotti(&self) -> f64 {
        clausius_mossotti(self.epsilon).expect("validated at construction")
    }

    /// `k⁴R⁶f_ε²`, the common scale of every dipole cross-section.
    fn dipole_scale(&self, k: f64) -> f64 {
        let f = self.clausius_mossotti();
        k.powi(4) * self.radius.powi(6) * f * f
    }
}

/// One field mode's occupation and the sphere's momentum-diffusion rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeRate {
    pub k: f64,
    pub nbar: f64,
    /// `Γ_k·V` (m³/s).
    pub gamma_k_v: f64,
}

/// Validity of the dipole-scattering model at the typical Unruh wavevector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticsValidity {
    pub k_typical: f64,
    pub kr_small: bool,
    /// `None` when no mass was given.
    pub heavy_sphere: Option<bool>,
    pub dipole_ok: bool,
}

/// Mean excitation per mode seen by an observer with proper acceleration `a`:
/// `n̄ = (1 + 2(a/ωc)²) / (e^{2πcω/a} − 1)`.
pub fn mean_occupation(omega: f64, a: f64, constants: &PhysicalConstants) -> Result<f64> {
    require_positive("omega", omega)?;
    require_positive("acceleration", a)?;
    Ok(occupation_dimensionless(constants.c * omega / a))
}

/// Ordinary Planck occupation at the Unruh temperature, for comparison only.
pub fn planck_occupation(omega: f64, a: f64, constants: &PhysicalConstants) -> Result<f64> {
    require_positive("omega", omega)?;
    require_positive("acceleration", a)?;
    Ok(1.0 / (2.0 * PI * constants.c * omega / a).exp_m1())
}

/// `n̄` as a function of `u = cω/a = c²k/a`.
pub fn occupation_dimensionless(u: f64) -> f64 {
    (1.0 + 2.0 / (u * u)) / (2.0 * PI * u).exp_m1()
}

/// `(ε − 1)/(ε + 2)`.
pub fn clausius_mossotti(epsilon: f64) -> Result<f64> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return domain(format!("permittivity must be > 0, got {epsilon}"));
    }
    if epsilon.is_infinite() {
        return Ok(1.0);
    }
    Ok((epsilon - 1.0) / (epsilon + 2.0))
}

/// Unpolarized dipole differential cross-section
/// `dσ/dΩ = k⁴R⁶f_ε² (1 + cos²θ)/2`.
pub fn diff_cross_section(k: f64, cos_theta: f64, optics: &SphereOptics) -> Result<f64> {
    require_positive("k", k)?;
    if !(-1.0..=1.0).contains(&cos_theta) {
        return domain(format!("cos(theta) = {cos_theta} outside [-1, 1]"));
    }
    Ok(optics.dipole_scale(k) * 0.5 * (1.0 + cos_theta * cos_theta))
}

pub fn total_cross_section(k: f64, optics: &SphereOptics) -> Result<f64> {
    require_positive("k", k)?;
    Ok(TOTAL_CROSS_SECTION_COEFFICIENT * optics.dipole_scale(k))
}

/// Angular integral `2π ∫ (1+μ²)/2 · w(μ) dμ` of the dipole phase function
/// against a weight, by adaptive quadrature.
pub fn angular_integral<W: Fn(f64) -> f64>(weight: W) -> Result<QuadResult> {
    let r = integrate_with_breaks(
        |mu| 0.5 * (1.0 + mu * mu) * weight(mu),
        &[-1.0, 0.0, 1.0],
        QuadConfig::relative(1e-13),
    )?;
    Ok(QuadResult {
        value: 2.0 * PI * r.value,
        error: 2.0 * PI * r.error,
        ..r
    })
}

/// `Γ_k·V = (16π/3) n̄(ck) c k⁴R⁶f_ε²`.
pub fn momentum_transfer_rate_volume(
    k: f64,
    a: f64,
    optics: &SphereOptics,
    constants: &PhysicalConstants,
) -> Result<ModeRate> {
    require_positive("k", k)?;
    let nbar = mean_occupation(constants.c * k, a, constants)?;
    Ok(ModeRate {
        k,
        nbar,
        gamma_k_v: MOMENTUM_TRANSFER_COEFFICIENT * nbar * constants.c * optics.dipole_scale(k),
    })
}

/// Typical thermal wavevector `k ≃ k_B T/ħc = a/2πc²`.
pub fn typical_wavevector(a: f64, constants: &PhysicalConstants) -> f64 {
    a / (2.0 * PI * constants.c * constants.c)
}

pub fn validity_flags(
    optics: &SphereOptics,
    a: f64,
    constants: &PhysicalConstants,
) -> OpticsValidity {
    let c = constants.c;
    let k_typical = typical_wavevector(a, constants);
    OpticsValidity {
        k_typical,
        kr_small: k_typical * optics.radius < 0.1,
        heavy_sphere: optics
            .mass
            .map(|m| constants.hbar * k_typical / (m * c) < 1e-3),
        dipole_ok: a * optics.radius / (c * c) <= 2.0 * PI,
    }
}

/// `u⁸ n̄(u)`, the integrand of the spectral kernel.
pub fn spectral_kernel_integrand(u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    u.powi(8) * occupation_dimensionless(u)
}

/// Upper bound on `∫_U^∞ u⁸ n̄(u) du`.
///
/// For `u ≥ U` the log-derivative of the integrand is below `8/U − 2π`, and
/// the remaining factors `(1 + 2/u²)` and `1/(1 − e^{−2πu})` only decrease,
/// so the tail is dominated by an exponential starting at `U`.
pub fn spectral_tail_bound(upper: f64) -> f64 {
    let rate = 2.0 * PI - 8.0 / upper;
    assert!(rate > 0.0, "tail bound needs U > 4/π");
    spectral_kernel_integrand(upper) / rate
}

/// Finite upper limit `U` for the spectral kernel such that the tail beyond
/// it is below `rel_tol` of the kernel, certified by [`spectral_tail_bound`].
pub fn spectral_cutoff(rel_tol: f64) -> f64 {
    // Any lower bound on J works for the relative test; the [0, 1] piece is ample.
    let floor = integrate_with_breaks(
        spectral_kernel_integrand,
        &[0.0, 1.0],
        QuadConfig::relative(1e-6),
    )
    .map(|r| r.value)
    .unwrap_or(1e-3);
    let mut upper: f64 = 2.0;
    while spectral_tail_bound(upper) > rel_tol * floor {
        upper *= 1.25;
    }
    upper
}

/// `J = ∫₀^∞ u⁸ n̄(u) du` by adaptive quadrature with certified truncation.
pub fn spectral_kernel_quadrature() -> Result<QuadResult> {
    let upper = spectral_cutoff(1e-14);
    integrate_with_breaks(
        spectral_kernel_integrand,
        &[0.0, 0.5, 1.0, 2.0, 4.0, upper],
        QuadConfig::relative(1e-13),
    )
}

/// `J = 8!ζ(9)/(2π)⁹ + 2·6!ζ(7)/(2π)⁷`.
pub fn spectral_kernel_series() -> f64 {
    bose_moment(8, 2.0 * PI) + 2.0 * bose_moment(6, 2.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn optics(epsilon: f64) -> SphereOptics {
        SphereOptics::new(epsilon, 1.0, None).unwrap()
    }

    #[test]
    fn occupation_at_ln2() {
        let a = 1.0;
        let omega = a * 2f64.ln() / (2.0 * PI);
        let n = mean_occupation(omega, a, &PhysicalConstants::NATURAL).unwrap();
        let expected = 1.0 + 2.0 * (2.0 * PI / 2f64.ln()).powi(2);
        assert_relative_eq!(n, expected, max_relative = 1e-13);
    }

    #[test]
    fn occupation_unit_inputs() {
        // 3/(e^{2π} − 1) from mpmath.
        let n = mean_occupation(1.0, 1.0, &PhysicalConstants::NATURAL).unwrap();
        assert_relative_eq!(n, 5.612_809_795_981_94e-3, max_relative = 1e-13);
    }

    #[test]
    fn occupation_vanishes_for_small_acceleration() {
        let n = mean_occupation(1.0, 1e-4, &PhysicalConstants::NATURAL).unwrap();
        assert_eq!(n, 0.0);
        assert!(mean_occupation(0.0, 1.0, &PhysicalConstants::NATURAL).is_err());
        assert!(mean_occupation(1.0, 0.0, &PhysicalConstants::NATURAL).is_err());
    }

    #[test]
    fn occupation_exceeds_planck() {
        let c = PhysicalConstants::NATURAL;
        for w in [0.1, 1.0, 3.0] {
            assert!(mean_occupation(w, 1.0, &c).unwrap() > planck_occupation(w, 1.0, &c).unwrap());
        }
    }

    #[test]
    fn clausius_mossotti_values() {
        assert_eq!(clausius_mossotti(1.0).unwrap(), 0.0);
        assert_eq!(clausius_mossotti(4.0).unwrap(), 0.5);
        assert_eq!(clausius_mossotti(f64::INFINITY).unwrap(), 1.0);
        assert!((clausius_mossotti(1e12).unwrap() - 1.0).abs() < 1e-11);
        assert!(clausius_mossotti(0.0).is_err());
        assert!(clausius_mossotti(-2.0).is_err());
        assert!(clausius_mossotti(f64::NAN).is_err());
    }

    #[test]
    fn vacuum_sphere_does_not_scatter() {
        let o = optics(1.0);
        for mu in [-1.0, 0.0, 0.3, 1.0] {
            assert_eq!(diff_cross_section(2.0, mu, &o).unwrap(), 0.0);
        }
        let rate =
            momentum_transfer_rate_volume(1.0, 1.0, &o, &PhysicalConstants::NATURAL).unwrap();
        assert_eq!(rate.gamma_k_v, 0.0);
    }

    #[test]
    fn cross_section_rejects_bad_angle() {
        assert!(diff_cross_section(1.0, 1.5, &optics(3.0)).is_err());
    }

    #[test]
    fn angular_coefficients() {
        let transfer = angular_integral(|mu| 2.0 * (1.0 - mu)).unwrap();
        assert_relative_eq!(
            transfer.value,
            MOMENTUM_TRANSFER_COEFFICIENT,
            max_relative = 1e-12
        );
        let total = angular_integral(|_| 1.0).unwrap();
        assert_relative_eq!(
            total.value,
            TOTAL_CROSS_SECTION_COEFFICIENT,
            max_relative = 1e-12
        );
        assert_relative_eq!(transfer.value, 2.0 * total.value, max_relative = 1e-12);
    }

    #[test]
    fn rate_unit_inputs() {
        let o = optics(f64::INFINITY);
        let r = momentum_transfer_rate_volume(1.0, 1.0, &o, &PhysicalConstants::NATURAL).unwrap();
        // (16π/3)·3/(e^{2π} − 1) from mpmath.
        assert_relative_eq!(r.gamma_k_v, 9.404_353_077_897_29e-2, max_relative = 1e-12);
    }

    #[test]
    fn rate_k4_scaling() {
        let c = PhysicalConstants::NATURAL;
        let o = optics(3.0);
        let r1 = momentum_transfer_rate_volume(0.7, 1.0, &o, &c).unwrap();
        let r2 = momentum_transfer_rate_volume(1.4, 1.0, &o, &c).unwrap();
        assert_relative_eq!(
            r2.gamma_k_v / r1.gamma_k_v,
            16.0 * r2.nbar / r1.nbar,
            max_relative = 1e-13
        );
    }

    #[test]
    fn validity() {
        let c = PhysicalConstants::NATURAL;
        let o = optics(3.0);
        let v = validity_flags(&o, 0.1, &c);
        assert!(v.dipole_ok && v.kr_small);
        assert_relative_eq!(
            v.k_typical * o.radius,
            0.1 / (2.0 * PI),
            max_relative = 1e-15
        );
        assert_eq!(v.heavy_sphere, None);
        let edge = validity_flags(&o, 2.0 * PI, &c);
        assert!(edge.dipole_ok);
        assert!(!validity_flags(&o, 2.0 * PI * 1.0001, &c).dipole_ok);
        let heavy = SphereOptics::new(3.0, 1.0, Some(1e6)).unwrap();
        assert_eq!(validity_flags(&heavy, 1.0, &c).heavy_sphere, Some(true));
        let light = SphereOptics::new(3.0, 1.0, Some(1.0)).unwrap();
        assert_eq!(validity_flags(&light, 1.0, &c).heavy_sphere, Some(false));
    }

    #[test]
    fn kernel_quadrature_matches_series() {
        let q = spectral_kernel_quadrature().unwrap();
        let s = spectral_kernel_series();
        assert_relative_eq!(q.value, s, max_relative = 1e-10);
        // mpmath: 8!ζ(9)/(2π)⁹ + 2·6!ζ(7)/(2π)⁷
        assert_relative_eq!(s, 6.403_019_898_091_69e-3, max_relative = 1e-13);
    }

    #[test]
    fn tail_bound_dominates_actual_tail() {
        for upper in [3.0, 5.0, 8.0] {
            let tail = integrate_with_breaks(
                spectral_kernel_integrand,
                &[upper, upper + 40.0],
                QuadConfig::relative(1e-12),
            )
            .unwrap()
            .value;
            assert!(spectral_tail_bound(upper) >= tail);
        }
    }
}
