//! Three-segment worldline of one interferometer arm.
//!
//! The arm accelerates away from the beam splitter for a proper time `τ₁`,
//! decelerates and returns during `2τ₁`, then decelerates to rest during the
//! final `τ₁`. Each segment is hyperbolic motion with proper acceleration of
//! magnitude `a`; the sign pattern is (+, −, +).

use serde::{Deserialize, Serialize};

use crate::error::{domain, require_non_negative, require_positive, Result};
use crate::units::{acosh_one_plus, DimensionlessGroups, PhysicalConstants};

/// Sign of the proper acceleration on each segment.
const SEGMENT_SIGN: [f64; 3] = [1.0, -1.0, 1.0];

/// Proper time of the first constant-acceleration segment,
/// `τ₁ = (c/a) acosh(1 + aR/2c²)`.
pub fn tau1(a: f64, radius: f64, constants: &PhysicalConstants) -> Result<f64> {
    require_positive("acceleration", a)?;
    require_positive("radius", radius)?;
    let c = constants.c;
    Ok(c / a * acosh_one_plus(a * radius / (2.0 * c * c)))
}

/// Segment index `j` for proper time `tau`: 0 on `[0, τ₁)`, 1 on `[τ₁, 3τ₁)`,
/// 2 on `[3τ₁, 4τ₁]`.
pub fn segment_index(tau: f64, tau1: f64) -> Result<usize> {
    require_positive("tau1", tau1)?;
    if !(0.0..=4.0 * tau1).contains(&tau) {
        return domain(format!("tau = {tau} outside [0, {}]", 4.0 * tau1));
    }
    Ok(if tau < tau1 {
        0
    } else if tau < 3.0 * tau1 {
        1
    } else {
        2
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryParams {
    pub a: f64,
    pub radius: f64,
    pub tau1: f64,
    pub total_proper_time: f64,
    pub constants: PhysicalConstants,
}

/// Instantaneous state of the arm in the beam-splitter frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicState {
    pub tau: f64,
    pub gamma: f64,
    /// Signed velocity along the arm; positive moving away from the splitter.
    pub velocity: f64,
    pub speed_abs: f64,
    /// Position along the arm, with `x(0) = 0`.
    pub x: f64,
    pub segment: usize,
}

/// Outcome of the rigid-motion check `aR/c² < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HorizonCheck {
    pub ok: bool,
    /// `c²/(aR)`; above 1 means the sphere's trailing surface is inside the
    /// Rindler horizon distance.
    pub margin: f64,
}

impl TrajectoryParams {
    pub fn new(a: f64, radius: f64, constants: PhysicalConstants) -> Result<Self> {
        let tau1 = tau1(a, radius, &constants)?;
        Ok(Self {
            a,
            radius,
            tau1,
            total_proper_time: 4.0 * tau1,
            constants,
        })
    }

    pub fn groups(&self) -> DimensionlessGroups {
        let c = self.constants.c;
        DimensionlessGroups {
            x: self.a * self.radius / (c * c),
            theta1: self.a * self.tau1 / c,
        }
    }

    /// Segment boundaries `[0, τ₁, 3τ₁, 4τ₁]`.
    pub fn boundaries(&self) -> [f64; 4] {
        [0.0, self.tau1, 3.0 * self.tau1, self.total_proper_time]
    }

    /// Rapidity-like argument `a(τ − 2jτ₁)/c` of segment `j`.
    fn local_argument(&self, tau: f64, segment: usize) -> f64 {
        self.a * (tau - 2.0 * segment as f64 * self.tau1) / self.constants.c
    }

    pub fn kinematics(&self, tau: f64) -> Result<KinematicState> {
        let segment = segment_index(tau, self.tau1)?;
        let c = self.constants.c;
        let arg = self.local_argument(tau, segment);
        let gamma = arg.cosh();
        let beta = arg.tanh();
        // x = (c²/a)(cosh(arg) − 1), written as 2 sinh²(arg/2) to survive small arg.
        let rise = |arg: f64| 2.0 * c * c / self.a * (0.5 * arg).sinh().powi(2);
        let x = match segment {
            // outbound apex x(2τ₁) = 2·x(τ₁), then falling back
            1 => 2.0 * rise(self.a * self.tau1 / c) - rise(arg),
            _ => rise(arg),
        };
        Ok(KinematicState {
            tau,
            gamma,
            // + 0.0 folds the −0 produced at turning points into +0
            velocity: SEGMENT_SIGN[segment] * c * beta + 0.0,
            speed_abs: c * beta.abs(),
            x,
            segment,
        })
    }

    /// `n` states on a uniform grid spanning `[0, 4τ₁]` inclusive.
    pub fn sample(&self, n: usize) -> Vec<KinematicState> {
        let step = if n > 1 {
            self.total_proper_time / (n - 1) as f64
        } else {
            0.0
        };
        (0..n)
            .map(|i| {
                let tau = if i + 1 == n && n > 1 {
                    self.total_proper_time
                } else {
                    step * i as f64
                };
                self.kinematics(tau)
                    .expect("grid lies inside the trajectory")
            })
            .collect()
    }
}

/// Rigid motion requires the sphere to stay clear of the Rindler horizon at
/// distance `c²/a`, i.e. `aR/c² < 1` (strict).
pub fn rindler_horizon_ok(
    a: f64,
    radius: f64,
    constants: &PhysicalConstants,
) -> Result<HorizonCheck> {
    require_non_negative("acceleration", a)?;
    require_positive("radius", radius)?;
    let c2 = constants.c * constants.c;
    let x = a * radius / c2;
    Ok(HorizonCheck {
        ok: x < 1.0,
        margin: if x > 0.0 { 1.0 / x } else { f64::INFINITY },
    })
}
