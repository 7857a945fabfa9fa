//! Decoherence of a dielectric sphere in a two-arm matter-wave interferometer
//! caused by Unruh radiation during piecewise constant proper acceleration.
//!
//! Modules, bottom-up:
//! - [`units`]: constants, natural units, Unruh temperature.
//! - [`worldline`]: the three-segment hyperbolic trajectory.
//! - [`radiation`]: occupation spectrum, dipole scattering, `Γ_k`.
//! - [`decoherence`]: per-mode phase spread, spectral integral, fit constants.
//! - [`montecarlo`]: stochastic momentum-walk oracle.
//! - [`dce`]: dynamical-Casimir mirror comparison.
//! - [`cli`]: the `unruh-decoherence` command line.

pub mod cli;
pub mod dce;
pub mod decoherence;
pub mod error;
pub mod montecarlo;
pub mod quadrature;
pub mod radiation;
pub mod special;
pub mod units;
pub mod worldline;

pub use error::{Error, Result};
pub use units::{DimensionlessGroups, PhysicalConstants};
