//! Dynamical-Casimir comparison: decoherence of an oscillating perfect mirror.
//!
//! A coherent state of amplitude `R` has `|α|² = R²Mω₀/2ħ` and loses
//! coherence at `Γ = |α|² ħω₀² / (3πMc²) = R²ω₀³/(6πc²)`. Requiring
//! `Γ ≤ ω₀/(Nπ)` over `N` half-periods gives `R²ω₀² ≤ 6c²/N`; with
//! `a ≃ ω₀²R` this is `Ra/c² ≤ 6/N`, usually quoted without the 6.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, require_non_negative, require_positive, Result};
use crate::units::PhysicalConstants;

/// `ω₀R/c` above which the low-velocity treatment is flagged.
pub const LOW_VELOCITY_LIMIT: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MirrorParams {
    pub mass: f64,
    pub omega0: f64,
    /// Oscillation amplitude (m).
    pub amplitude: f64,
    /// Half-periods that must pass without substantial decoherence.
    pub half_periods: u32,
}

impl MirrorParams {
    pub fn new(mass: f64, omega0: f64, amplitude: f64, half_periods: u32) -> Result<Self> {
        require_positive("mass", mass)?;
        require_positive("omega0", omega0)?;
        require_non_negative("amplitude", amplitude)?;
        if half_periods < 1 {
            return domain("number of half-periods must be >= 1");
        }
        Ok(Self {
            mass,
            omega0,
            amplitude,
            half_periods,
        })
    }

    /// `a ≃ ω₀²R`.
    pub fn acceleration(&self) -> f64 {
        self.omega0 * self.omega0 * self.amplitude
    }
}

/// Thresholds on `Ra/c²` for coherence over `N` half-periods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceBound {
    pub half_periods: u32,
    /// From `R²ω₀² ≤ 6c²/N`: `Ra/c² ≤ 6/N`.
    pub exact_threshold: f64,
    /// Order-of-magnitude form `Ra/c² ≤ 1/N`.
    pub estimate_threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MirrorReport {
    pub alpha_sq: f64,
    pub rate: f64,
    /// `Ra/c²` with `a = ω₀²R`.
    pub ra_over_c2: f64,
    pub bound: CoherenceBound,
    pub coherent_exact: bool,
    pub coherent_estimate: bool,
    /// `ω₀R/c ≥ 0.3`: outside the low-velocity regime the rate assumes.
    pub high_velocity: bool,
}

/// `|α|² = R²Mω₀/(2ħ)`.
pub fn coherent_amplitude_sq(params: &MirrorParams, constants: &PhysicalConstants) -> f64 {
    params.amplitude.powi(2) * params.mass * params.omega0 / (2.0 * constants.hbar)
}

/// `Γ = |α|² ħω₀² / (3πMc²)`.
pub fn dce_decoherence_rate(params: &MirrorParams, constants: &PhysicalConstants) -> f64 {
    coherent_amplitude_sq(params, constants) * constants.hbar * params.omega0.powi(2)
        / (3.0 * PI * params.mass * constants.c.powi(2))
}

/// Reduced form `R²ω₀³/(6πc²)`, independent of `M` and `ħ`.
pub fn dce_decoherence_rate_reduced(params: &MirrorParams, constants: &PhysicalConstants) -> f64 {
    params.amplitude.powi(2) * params.omega0.powi(3) / (6.0 * PI * constants.c.powi(2))
}

pub fn coherence_bound(half_periods: u32) -> Result<CoherenceBound> {
    if half_periods < 1 {
        return domain("number of half-periods must be >= 1");
    }
    let n = f64::from(half_periods);
    Ok(CoherenceBound {
        half_periods,
        exact_threshold: 6.0 / n,
        estimate_threshold: 1.0 / n,
    })
}

pub fn check_mirror(params: &MirrorParams, constants: &PhysicalConstants) -> MirrorReport {
    let c = constants.c;
    let bound = coherence_bound(params.half_periods).expect("validated half-periods");
    let ra_over_c2 = params.amplitude * params.acceleration() / (c * c);
    MirrorReport {
        alpha_sq: coherent_amplitude_sq(params, constants),
        rate: dce_decoherence_rate(params, constants),
        ra_over_c2,
        bound,
        coherent_exact: ra_over_c2 <= bound.exact_threshold,
        coherent_estimate: ra_over_c2 <= bound.estimate_threshold,
        high_velocity: params.omega0 * params.amplitude / c >= LOW_VELOCITY_LIMIT,
    }
}
