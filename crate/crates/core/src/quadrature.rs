//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! error meets `max(abs_tol, rel_tol * |I|)`.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// 15-point Kronrod abscissae (non-negative half) with the embedded 7-point
// Gauss rule on the odd indices.
const XK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and subdivision budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol: 1e-12,
            max_intervals: 2000,
        }
    }
}

impl QuadConfig {
    pub fn relative(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

/// Integral estimate with its error bound and the work spent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

struct Segment {
    lower: f64,
    upper: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, lower: f64, upper: f64) -> Segment {
    let center = 0.5 * (lower + upper);
    let half = 0.5 * (upper - lower);
    let fc = f(center);
    let mut left = [0.0; 7];
    let mut right = [0.0; 7];
    for i in 0..7 {
        let dx = half * XK[i];
        left[i] = f(center - dx);
        right[i] = f(center + dx);
    }
    let mut kronrod = fc * WK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.abs() * WK[7];
    for i in 0..7 {
        kronrod += WK[i] * (left[i] + right[i]);
        abs_sum += WK[i] * (left[i].abs() + right[i].abs());
        if i % 2 == 1 {
            gauss += WG[i / 2] * (left[i] + right[i]);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WK[7] * (fc - mean).abs();
    for i in 0..7 {
        asc += WK[i] * ((left[i] - mean).abs() + (right[i] - mean).abs());
    }
    Segment {
        lower,
        upper,
        value: kronrod * half,
        error: rescale_error(
            (kronrod - gauss) * half,
            abs_sum * half.abs(),
            asc * half.abs(),
        ),
    }
}

// QUADPACK-style error scaling.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        scaled = res_asc * (200.0 * scaled / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// Integrates `f` over `[lower, upper]`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lower: f64,
    upper: f64,
    config: QuadConfig,
) -> Result<QuadResult> {
    integrate_with_breaks(f, &[lower, upper], config)
}

/// Integrates `f` over `[points[0], points[last]]`, with the given interior
/// points as initial subdivision boundaries (kinks, segment joins).
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    config: QuadConfig,
) -> Result<QuadResult> {
    assert!(points.len() >= 2, "need at least two break points");
    let mut heap: BinaryHeap<Segment> = points
        .windows(2)
        .filter(|w| w[1] != w[0])
        .map(|w| kronrod15(&f, w[0], w[1]))
        .collect();
    let mut evaluations = 15 * heap.len();
    loop {
        let value: f64 = heap.iter().map(|s| s.value).sum();
        let error: f64 = heap.iter().map(|s| s.error).sum();
        let target = config.abs_tol.max(config.rel_tol * value.abs());
        if error <= target || heap.is_empty() {
            return Ok(QuadResult {
                value,
                error,
                intervals: heap.len(),
                evaluations,
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.lower + worst.upper);
        if heap.len() + 2 > config.max_intervals || mid <= worst.lower || mid >= worst.upper {
            heap.push(worst);
            return Err(Error::Quadrature {
                lower: points[0],
                upper: points[points.len() - 1],
                estimate: value,
                error,
                intervals: heap.len(),
            });
        }
        heap.push(kronrod15(&f, worst.lower, mid));
        heap.push(kronrod15(&f, mid, worst.upper));
        evaluations += 30;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(|x| x.powi(7) - 3.0 * x * x, 0.0, 2.0, QuadConfig::default()).unwrap();
        assert_relative_eq!(r.value, 256.0 / 8.0 - 8.0, max_relative = 1e-14);
        assert_eq!(r.intervals, 1);
    }

    #[test]
    fn smooth_transcendental() {
        let r = integrate(|x| x.sin(), 0.0, PI, QuadConfig::default()).unwrap();
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-13);
    }

    #[test]
    fn endpoint_power_singularity() {
        let r = integrate(|x| x.sqrt(), 0.0, 1.0, QuadConfig::relative(1e-12)).unwrap();
        assert_relative_eq!(r.value, 2.0 / 3.0, max_relative = 1e-12);
        let r = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, QuadConfig::relative(1e-10)).unwrap();
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-9);
    }

    #[test]
    fn break_points_handle_kinks() {
        let r = integrate_with_breaks(
            |x: f64| (x - 0.3).abs(),
            &[0.0, 0.3, 1.0],
            QuadConfig::default(),
        )
        .unwrap();
        assert_relative_eq!(r.value, 0.5 * (0.09 + 0.49), max_relative = 1e-14);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let cfg = QuadConfig {
            abs_tol: 0.0,
            rel_tol: 1e-15,
            max_intervals: 3,
        };
        let err = integrate(|x| (1.0 / x).sin(), 1e-6, 1.0, cfg).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }
}
