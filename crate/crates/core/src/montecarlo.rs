//! Stochastic oracle for the momentum random walk of the sphere.
//!
//! Each realization is a compound Poisson process: scattering events arrive at
//! rate `λ = σ_tot n̄ c / V`, the incident direction is isotropic, and the
//! deflection follows the dipole phase function `∝ 1 + cos²θ`. Kicks are
//! elastic, `δp = ħk(n̂ − n̂′)`.
//!
//! Realization `i` draws from its own ChaCha8 stream `(seed, i)`, so results do
//! not depend on how the ensemble is scheduled across threads.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoherence::{trajectory_integral_g, DecoherenceInput};
use crate::error::{domain, require_positive, Result};
use crate::quadrature::{integrate_with_breaks, QuadConfig};
use crate::radiation::{mean_occupation, momentum_transfer_rate_volume, total_cross_section};

/// Name of the per-realization generator, reported alongside results.
pub const RNG_ALGORITHM: &str = "chacha8-stream-per-realization";

type Vec3 = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub seed: u64,
    pub n_realizations: usize,
    pub k: f64,
    pub input: DecoherenceInput,
    /// Quantization volume `V`; only fixes the event rate, cancels in every
    /// comparison against `Γ_k`.
    pub volume: f64,
    /// `λV = σ_tot n̄ c` (m³/s).
    pub event_rate_volume: f64,
}

impl McConfig {
    pub fn new(
        seed: u64,
        n_realizations: usize,
        k: f64,
        input: DecoherenceInput,
        volume: f64,
    ) -> Result<Self> {
        if n_realizations == 0 {
            return domain("n_realizations must be >= 1");
        }
        require_positive("k", k)?;
        require_positive("volume", volume)?;
        let c = input.constants.c;
        let nbar = mean_occupation(c * k, input.a, &input.constants)?;
        let event_rate_volume = total_cross_section(k, &input.optics)? * nbar * c;
        Ok(Self {
            seed,
            n_realizations,
            k,
            input,
            volume,
            event_rate_volume,
        })
    }

    /// Chooses `V` so that on average `mean_events` scatterings occur in `tau`.
    pub fn with_mean_events(
        seed: u64,
        n_realizations: usize,
        k: f64,
        input: DecoherenceInput,
        tau: f64,
        mean_events: f64,
    ) -> Result<Self> {
        require_positive("tau", tau)?;
        require_positive("mean_events", mean_events)?;
        let probe = Self::new(seed, n_realizations, k, input, 1.0)?;
        let volume = if probe.event_rate_volume > 0.0 {
            probe.event_rate_volume * tau / mean_events
        } else {
            1.0
        };
        Self::new(seed, n_realizations, k, input, volume)
    }

    /// Scattering events per unit proper time.
    pub fn event_rate(&self) -> f64 {
        self.event_rate_volume / self.volume
    }

    /// `Γ_k` for this volume.
    pub fn gamma_k(&self) -> Result<f64> {
        let rate = momentum_transfer_rate_volume(
            self.k,
            self.input.a,
            &self.input.optics,
            &self.input.constants,
        )?;
        Ok(rate.gamma_k_v / self.volume)
    }

    fn rng(&self, realization: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(realization as u64);
        rng
    }

    fn hbar_k(&self) -> f64 {
        self.input.constants.hbar * self.k
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McResult {
    pub seed: u64,
    pub n_realizations: usize,
    pub tau: f64,
    pub mean_events: f64,
    /// Ensemble mean of `|Σδp|²`.
    pub mean_dp_sq: f64,
    pub stderr: f64,
    /// `ħ²k²Γ_kτ`.
    pub analytic: f64,
    /// `(mean_dp_sq − analytic)/stderr`; zero when both vanish.
    pub z_score: f64,
    pub phase_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseWalkResult {
    pub n_realizations: usize,
    pub mean_events: f64,
    pub phase_std: f64,
    /// `k√Γ_k ∫γ²|v|√τ dτ`.
    pub prediction: f64,
    /// `phase_std / prediction`; `None` when there is no scattering.
    pub phase_ratio: Option<f64>,
    /// Ratio expected for an exact compound-Poisson walk, see [`phase_ratio_theory`].
    pub theory_ratio: f64,
}

/// Uniform direction on the unit sphere.
pub fn sample_isotropic<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    let mu: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    let s = (1.0 - mu * mu).max(0.0).sqrt();
    [s * phi.cos(), s * phi.sin(), mu]
}

/// Inverts the dipole-scattering CDF `(μ + μ³/3 + 4/3)/(8/3) = u` for `μ`.
pub fn scatter_cos_from_uniform(u: f64) -> f64 {
    let target = 8.0 * u / 3.0 - 4.0 / 3.0;
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    // the CDF is close to linear, so u maps to a good first guess
    let mut mu = 2.0 * u - 1.0;
    for _ in 0..100 {
        let residual = mu + mu.powi(3) / 3.0 - target;
        if residual == 0.0 {
            return mu;
        }
        if residual > 0.0 {
            hi = mu;
        } else {
            lo = mu;
        }
        let step = residual / (1.0 + mu * mu);
        if step.abs() < 1e-13 || hi - lo < 1e-12 {
            return (mu - step).clamp(-1.0, 1.0);
        }
        let newton = mu - step;
        mu = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    mu
}

/// `cos θ` distributed as `(1 + cos²θ)`.
pub fn sample_scatter_cos<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    scatter_cos_from_uniform(rng.random::<f64>())
}

/// Unit-momentum kick `n̂ − n̂′` of one elastic scattering.
pub fn sample_kick<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    let incident = sample_isotropic(rng);
    let mu = sample_scatter_cos(rng);
    let psi: f64 = rng.random_range(0.0..2.0 * PI);
    let (e1, e2) = orthonormal_basis(&incident);
    let s = (1.0 - mu * mu).max(0.0).sqrt();
    let mut kick = [0.0; 3];
    for i in 0..3 {
        let scattered = mu * incident[i] + s * (psi.cos() * e1[i] + psi.sin() * e2[i]);
        kick[i] = incident[i] - scattered;
    }
    kick
}

fn orthonormal_basis(n: &Vec3) -> (Vec3, Vec3) {
    // Frisvad-style construction, branch on the sign of z.
    let sign = 1.0f64.copysign(n[2]);
    let a = -1.0 / (sign + n[2]);
    let b = n[0] * n[1] * a;
    (
        [1.0 + sign * n[0] * n[0] * a, sign * b, -sign * n[0]],
        [b, sign + n[1] * n[1] * a, -n[1]],
    )
}

fn event_count<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean)
        .expect("positive finite mean")
        .sample(rng) as u64
}

/// Sample mean and (n − 1)-normalized standard deviation.
fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Accumulates the rest-frame momentum over proper time `tau` and compares
/// the ensemble mean of `|Σδp|²` against `ħ²k²Γ_kτ`.
pub fn momentum_walk(config: &McConfig, tau: f64) -> Result<McResult> {
    require_positive("tau", tau)?;
    let mean_events = config.event_rate() * tau;
    let samples: Vec<f64> = (0..config.n_realizations)
        .into_par_iter()
        .map(|i| {
            let mut rng = config.rng(i);
            let mut total = [0.0; 3];
            for _ in 0..event_count(&mut rng, mean_events) {
                let kick = sample_kick(&mut rng);
                for d in 0..3 {
                    total[d] += kick[d];
                }
            }
            total.iter().map(|p| p * p).sum::<f64>()
        })
        .collect();
    let scale = config.hbar_k().powi(2);
    let (mean, std) = mean_and_std(&samples);
    let mean_dp_sq = mean * scale;
    let stderr = std * scale / (samples.len() as f64).sqrt();
    let analytic = scale * config.gamma_k()? * tau;
    let diff = mean_dp_sq - analytic;
    let z_score = if stderr > 0.0 {
        diff / stderr
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(diff)
    };
    Ok(McResult {
        seed: config.seed,
        n_realizations: config.n_realizations,
        tau,
        mean_events,
        mean_dp_sq,
        stderr,
        analytic,
        z_score,
        phase_ratio: None,
    })
}

/// `S(s) = (2a/c²) ∫₀^τ γ²|v| dτ'` on the scaled clock `s = aτ/c`.
fn cumulative_weight(s: f64, theta1: f64) -> f64 {
    let sh2 = |y: f64| y.sinh().powi(2);
    let edge = sh2(theta1);
    if s < theta1 {
        sh2(s)
    } else if s < 3.0 * theta1 {
        let y = s - 2.0 * theta1;
        if y < 0.0 {
            2.0 * edge - sh2(y)
        } else {
            2.0 * edge + sh2(y)
        }
    } else {
        4.0 * edge - sh2(s - 4.0 * theta1)
    }
}

/// Phase-std ratio for an exact compound-Poisson walk whose `x`-kicks carry
/// one third of `|δp|²`: `√(∫(S_T − S)² ds / 12) / G(θ₁)`.
pub fn phase_ratio_theory(theta1: f64) -> Result<f64> {
    require_positive("theta1", theta1)?;
    let total = cumulative_weight(4.0 * theta1, theta1);
    let spread = integrate_with_breaks(
        |s| (total - cumulative_weight(s, theta1)).powi(2),
        &[0.0, theta1, 2.0 * theta1, 3.0 * theta1, 4.0 * theta1],
        QuadConfig::relative(1e-12),
    )?;
    Ok((spread.value / 12.0).sqrt() / trajectory_integral_g(theta1)?.value)
}

/// Integrates `dφ = γ²|v| p_x(τ)/ħ dτ` along the trajectory, with `p_x` the
/// rest-frame walk, and reports the ensemble spread relative to the
/// integrated-standard-deviation prediction.
pub fn phase_walk(config: &McConfig) -> Result<PhaseWalkResult> {
    let params = config.input.trajectory();
    let theta1 = params.groups().theta1;
    let (a, c) = (config.input.a, config.input.constants.c);
    let total_time = params.total_proper_time;
    let mean_events = config.event_rate() * total_time;
    let weight_scale = c * c / (2.0 * a);
    let remaining = |tau: f64| {
        let s = (a * tau / c).min(4.0 * theta1);
        weight_scale * (cumulative_weight(4.0 * theta1, theta1) - cumulative_weight(s, theta1))
    };

    let phases: Vec<f64> = (0..config.n_realizations)
        .into_par_iter()
        .map(|i| {
            let mut rng = config.rng(i);
            let mut phase = 0.0;
            for _ in 0..event_count(&mut rng, mean_events) {
                let t = rng.random::<f64>() * total_time;
                phase += sample_kick(&mut rng)[0] * remaining(t);
            }
            phase
        })
        .collect();
    // kicks were drawn in units of ħk; the ħ of dφ = p dx/ħ cancels it
    let phase_std = mean_and_std(&phases).1 * config.k;

    let g = trajectory_integral_g(theta1)?.value;
    let prediction = config.k * config.gamma_k()?.sqrt() * c.powf(2.5) / a.powf(1.5) * g;
    Ok(PhaseWalkResult {
        n_realizations: config.n_realizations,
        mean_events,
        phase_std,
        prediction,
        phase_ratio: (prediction > 0.0).then(|| phase_std / prediction),
        theory_ratio: phase_ratio_theory(theta1)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radiation::SphereOptics;
    use crate::units::PhysicalConstants;
    use approx::assert_relative_eq;

    fn input(epsilon: f64) -> DecoherenceInput {
        let optics = SphereOptics::new(epsilon, 1.0, None).unwrap();
        DecoherenceInput::new(0.7, optics, PhysicalConstants::NATURAL).unwrap()
    }

    #[test]
    fn inverse_cdf_matches_cardano() {
        // μ³ + 3μ = q with q = 8u − 4 has the single real root
        // cbrt(q/2 + √(q²/4 + 1)) + cbrt(q/2 − √(q²/4 + 1)).
        for i in 0..=100 {
            let u = i as f64 / 100.0;
            let q = 8.0 * u - 4.0;
            let d = (q * q / 4.0 + 1.0).sqrt();
            let cardano = (q / 2.0 + d).cbrt() + (q / 2.0 - d).cbrt();
            assert!(
                (scatter_cos_from_uniform(u) - cardano).abs() < 1e-11,
                "u = {u}"
            );
        }
    }

    #[test]
    fn scatter_moments() {
        // ∫μ(1+μ²) = 0, ∫μ²(1+μ²)/∫(1+μ²) = (2/3 + 2/5)/(8/3) = 2/5.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 1_000_000;
        let (mut m1, mut m2) = (0.0, 0.0);
        for _ in 0..n {
            let mu = sample_scatter_cos(&mut rng);
            m1 += mu;
            m2 += mu * mu;
        }
        let (m1, m2) = (m1 / n as f64, m2 / n as f64);
        // σ(μ) = √(2/5), σ(μ²) = √(E μ⁴ − 4/25) with E μ⁴ = (2/5 + 2/7)/(8/3) = 9/35
        assert!(m1.abs() < 4.0 * (0.4f64 / n as f64).sqrt());
        let sd2 = (9.0 / 35.0 - 0.16f64).sqrt();
        assert!(
            (m2 - 0.4).abs() < 4.0 * sd2 / (n as f64).sqrt(),
            "E[mu^2] = {m2}"
        );
        let transfer = 2.0 * (1.0 - m1);
        assert!((transfer - 2.0).abs() < 8.0 * (0.4f64 / n as f64).sqrt());
    }

    #[test]
    fn isotropic_directions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 200_000;
        let mut mean = [0.0; 3];
        for _ in 0..n {
            let d = sample_isotropic(&mut rng);
            assert!((d.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
            for i in 0..3 {
                mean[i] += d[i] / n as f64;
            }
        }
        let norm = mean.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!(norm < 4.0 / (3.0 * n as f64).sqrt());
    }

    #[test]
    fn kick_magnitude_matches_deflection() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let incident = sample_isotropic(&mut rng);
            let (e1, e2) = orthonormal_basis(&incident);
            let dot = |u: &Vec3, v: &Vec3| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
            assert!(dot(&incident, &e1).abs() < 1e-12 && dot(&e1, &e2).abs() < 1e-12);
            assert!((dot(&e2, &e2) - 1.0).abs() < 1e-12);
            let kick = sample_kick(&mut rng);
            let sq = dot(&kick, &kick);
            assert!((0.0..=4.0 + 1e-12).contains(&sq));
        }
    }

    #[test]
    fn cumulative_weight_matches_quadrature() {
        let theta: f64 = 0.8;
        for &s in &[0.3, 0.8, 1.2, 1.6, 2.1, 2.4, 2.9, 3.2] {
            let direct = integrate_with_breaks(
                |t: f64| {
                    let y = if t < theta {
                        t
                    } else if t < 3.0 * theta {
                        t - 2.0 * theta
                    } else {
                        t - 4.0 * theta
                    };
                    (2.0 * y).sinh().abs()
                },
                &[
                    0.0,
                    theta.min(s),
                    (2.0 * theta).min(s),
                    (3.0 * theta).min(s),
                    s,
                ],
                QuadConfig::relative(1e-13),
            )
            .unwrap()
            .value;
            assert_relative_eq!(cumulative_weight(s, theta), direct, max_relative = 1e-11);
        }
    }

    #[test]
    fn vacuum_sphere_walk_is_zero() {
        let cfg = McConfig::with_mean_events(1, 100, 1.0, input(1.0), 1.0, 50.0).unwrap();
        let r = momentum_walk(&cfg, 1.0).unwrap();
        assert_eq!(
            (r.mean_dp_sq, r.stderr, r.analytic, r.z_score),
            (0.0, 0.0, 0.0, 0.0)
        );
        let p = phase_walk(&cfg).unwrap();
        assert_eq!(p.phase_std, 0.0);
        assert_eq!(p.phase_ratio, None);
    }

    #[test]
    fn walk_matches_diffusion_law() {
        let cfg = McConfig::with_mean_events(42, 10_000, 0.8, input(3.0), 2.0, 40.0).unwrap();
        let r = momentum_walk(&cfg, 2.0).unwrap();
        assert!(r.z_score.abs() < 4.0, "z = {}", r.z_score);
        assert_relative_eq!(r.mean_events, 40.0, max_relative = 1e-12);
    }

    #[test]
    fn deterministic_for_seed() {
        let cfg = McConfig::with_mean_events(9, 500, 1.0, input(3.0), 1.0, 20.0).unwrap();
        assert_eq!(
            momentum_walk(&cfg, 1.0).unwrap(),
            momentum_walk(&cfg, 1.0).unwrap()
        );
        let other = McConfig { seed: 10, ..cfg };
        assert_ne!(
            momentum_walk(&cfg, 1.0).unwrap().mean_dp_sq,
            momentum_walk(&other, 1.0).unwrap().mean_dp_sq
        );
    }

    #[test]
    fn rejects_bad_config() {
        assert!(McConfig::new(0, 0, 1.0, input(3.0), 1.0).is_err());
        assert!(McConfig::new(0, 10, 1.0, input(3.0), 0.0).is_err());
        let cfg = McConfig::new(0, 10, 1.0, input(3.0), 1.0).unwrap();
        assert!(momentum_walk(&cfg, 0.0).is_err());
    }

    #[test]
    fn phase_walk_matches_theory() {
        let cfg = McConfig::with_mean_events(5, 20_000, 0.5, input(3.0), 1.0, 1.0).unwrap();
        let tau_total = cfg.input.trajectory().total_proper_time;
        let cfg = McConfig::with_mean_events(5, 20_000, 0.5, input(3.0), tau_total, 60.0).unwrap();
        let p = phase_walk(&cfg).unwrap();
        let ratio = p.phase_ratio.unwrap();
        // std estimate of a near-Gaussian sample: relative error ≈ 1/√(2n)
        assert!((ratio / p.theory_ratio - 1.0).abs() < 4.0 / (2.0 * 20_000f64).sqrt());
    }
}
