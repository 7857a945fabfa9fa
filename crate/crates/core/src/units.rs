//! Physical constants, the natural-unit switch and the Unruh temperature.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Result};

/// Speed of light in vacuum (m/s), exact.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Reduced Planck constant (J s), exact since the 2019 SI redefinition.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant (J/K), exact.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// The three constants every formula in this crate is written against.
///
/// Formulas always carry `c`, `hbar` and `kb` explicitly, so switching to
/// natural units only swaps the values, never the code path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub c: f64,
    pub hbar: f64,
    pub kb: f64,
}

impl PhysicalConstants {
    pub const SI: Self = Self {
        c: SPEED_OF_LIGHT,
        hbar: HBAR,
        kb: BOLTZMANN,
    };

    pub const NATURAL: Self = Self {
        c: 1.0,
        hbar: 1.0,
        kb: 1.0,
    };

    pub fn new(c: f64, hbar: f64, kb: f64) -> Result<Self> {
        require_positive("c", c)?;
        require_positive("hbar", hbar)?;
        require_positive("kB", kb)?;
        Ok(Self { c, hbar, kb })
    }

    /// SI values, or `c = ħ = k_B = 1` when `natural` is set.
    pub fn for_mode(natural: bool) -> Self {
        if natural {
            Self::NATURAL
        } else {
            Self::SI
        }
    }

    pub fn is_natural(&self) -> bool {
        *self == Self::NATURAL
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::SI
    }
}

/// The dimensionless combinations that control every result:
/// `x = aR/c²` and `theta1 = aτ₁/c = acosh(1 + x/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessGroups {
    pub x: f64,
    pub theta1: f64,
}

impl DimensionlessGroups {
    /// Groups for a given `x`.
    pub fn from_x(x: f64) -> Result<Self> {
        require_non_negative("aR/c^2", x)?;
        Ok(Self {
            x,
            theta1: acosh_one_plus(x / 2.0),
        })
    }
}

/// `acosh(1 + y)` without the cancellation `1 + y` suffers for small `y`.
///
/// Uses `acosh(1+y) = ln(1 + y + sqrt(y(2+y)))`, which tends to `sqrt(2y)`
/// to full precision as `y -> 0`.
pub fn acosh_one_plus(y: f64) -> f64 {
    (y + (y * (2.0 + y)).sqrt()).ln_1p()
}

/// Unruh temperature `ħa / (2π c k_B)` for proper acceleration `a`.
pub fn unruh_temperature(a: f64, constants: &PhysicalConstants) -> Result<f64> {
    require_non_negative("acceleration", a)?;
    Ok(constants.hbar * a / (2.0 * PI * constants.c * constants.kb))
}

/// `x = aR/c²` and `theta1 = acosh(1 + x/2)`.
pub fn dimensionless_groups(
    a: f64,
    radius: f64,
    constants: &PhysicalConstants,
) -> Result<DimensionlessGroups> {
    require_non_negative("acceleration", a)?;
    require_positive("radius", radius)?;
    DimensionlessGroups::from_x(a * radius / (constants.c * constants.c))
}
