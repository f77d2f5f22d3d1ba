//! Adaptive Gauss–Kronrod (7/15) quadrature for complex-valued integrands of
//! one real variable.
//!
//! Error accounting is absolute. A segment is accepted once the summed error
//! estimate is below the requested tolerance, or below the round-off floor
//! [`ROUNDOFF_FLOOR`]`·∫|f|` when the tolerance is unattainable in double
//! precision; in the latter case the reported `abs_error` may exceed `tol`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative accuracy below which an error estimate is treated as round-off
/// noise. Integrands built from `exp` of arguments of order 60 carry a few
/// hundred ulps of noise, so this sits above the bare `50·ε` of QUADPACK.
pub const ROUNDOFF_FLOOR: f64 = 200.0 * f64::EPSILON;

/// Bisection depth limit for a single interval.
pub const MAX_DEPTH: u32 = 50;
/// Upper bound on the number of live intervals in one adaptive run.
pub const MAX_INTERVALS: usize = 5000;
/// Adaptive steps between exact re-summations of the running totals.
const RESUM_EVERY: usize = 64;
/// Number of geometrically growing panels tried by [`integrate_tail`].
pub const MAX_TAIL_PANELS: usize = 64;

// Kronrod abscissae (positive half, descending) and weights; the odd-indexed
// nodes are the 7-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub abs_error: f64,
    pub evaluations: usize,
}

impl QuadratureResult {
    pub const ZERO: Self = Self {
        value: Complex64::new(0.0, 0.0),
        abs_error: 0.0,
        evaluations: 0,
    };

    fn accumulate(&mut self, other: &Self) {
        self.value += other.value;
        self.abs_error += other.abs_error;
        self.evaluations += other.evaluations;
    }
}

/// Where an integrable `1/√(x − x₀)` singularity sits, if anywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Endpoint {
    #[default]
    Regular,
    /// Singular at the lower limit; integrated in `t` with `x = a + t²`.
    SqrtLower,
    /// Singular at the upper limit; integrated in `t` with `x = b − t²`.
    SqrtUpper,
}

struct Panel {
    lo: f64,
    hi: f64,
    value: Complex64,
    error: f64,
    abs_mass: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            // deterministic tie-break: leftmost panel first
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn kronrod15<F: Fn(f64) -> Complex64>(f: &F, lo: f64, hi: f64, depth: u32) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let f_center = f(center);
    let mut kronrod = f_center * WGK[7];
    let mut gauss = f_center * WG[3];
    let mut abs_mass = f_center.norm() * WGK[7];
    let mut values = [(Complex64::default(), Complex64::default()); 7];

    for (j, x) in XGK[..7].iter().enumerate() {
        let dx = half * x;
        let (f1, f2) = (f(center - dx), f(center + dx));
        values[j] = (f1, f2);
        kronrod += (f1 + f2) * WGK[j];
        abs_mass += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }

    let mean = kronrod * 0.5;
    let mut spread = (f_center - mean).norm() * WGK[7];
    for (j, (f1, f2)) in values.iter().enumerate() {
        spread += ((f1 - mean).norm() + (f2 - mean).norm()) * WGK[j];
    }

    let scale = half.abs();
    let value = kronrod * half;
    let abs_mass = abs_mass * scale;
    let spread = spread * scale;

    // QUADPACK's rescaling of |K15 − G7|
    let mut error = ((kronrod - gauss) * half).norm();
    if spread != 0.0 && error != 0.0 {
        error = spread * (200.0 * error / spread).powf(1.5).min(1.0);
    }
    if abs_mass > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_mass);
    }
    if !error.is_finite() || !value.re.is_finite() || !value.im.is_finite() {
        error = f64::INFINITY;
    }

    Panel {
        lo,
        hi,
        value,
        error,
        abs_mass,
        depth,
    }
}

fn validate(a: f64, b: f64, tol: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::InvalidArgument(format!(
            "integration limits must be finite with a < b, got [{a}, {b}]"
        )));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

fn adaptive<F: Fn(f64) -> Complex64>(f: &F, lo: f64, hi: f64, tol: f64) -> Result<QuadratureResult> {
    let first = kronrod15(f, lo, hi, 0);
    let mut evaluations = 15;
    let mut value = first.value;
    let mut error = first.error;
    let mut abs_mass = first.abs_mass;
    let mut heap = BinaryHeap::from(vec![first]);

    for step in 1usize.. {
        if step % RESUM_EVERY == 0 {
            // the running sums drift once large early panels have been replaced
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
            abs_mass = heap.iter().map(|p| p.abs_mass).sum();
        }
        let roundoff = ROUNDOFF_FLOOR * abs_mass;
        if error <= tol || error <= roundoff {
            return Ok(QuadratureResult {
                value,
                abs_error: error,
                evaluations,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        let splittable = worst.depth < MAX_DEPTH && mid > worst.lo && mid < worst.hi;
        if !splittable || heap.len() + 2 > MAX_INTERVALS || !error.is_finite() {
            heap.push(worst);
            // re-sum so the reported estimate is not polluted by cancellation drift
            let value = heap.iter().map(|p| p.value).sum();
            let abs_error: f64 = heap.iter().map(|p| p.error).sum();
            let abs_mass: f64 = heap.iter().map(|p| p.abs_mass).sum();
            if abs_error <= tol || abs_error <= ROUNDOFF_FLOOR * abs_mass {
                return Ok(QuadratureResult {
                    value,
                    abs_error,
                    evaluations,
                });
            }
            return Err(Error::NoConvergence {
                best: QuadratureResult {
                    value,
                    abs_error,
                    evaluations,
                },
            });
        }
        let left = kronrod15(f, worst.lo, mid, worst.depth + 1);
        let right = kronrod15(f, mid, worst.hi, worst.depth + 1);
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        abs_mass += left.abs_mass + right.abs_mass - worst.abs_mass;
        heap.push(left);
        heap.push(right);
    }
    unreachable!("the step counter does not overflow")
}

/// `∫ₐᵇ f(x) dx` to absolute accuracy `tol`.
pub fn integrate_segment<F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    integrate_segment_with(f, a, b, Endpoint::Regular, tol)
}

/// As [`integrate_segment`], removing an inverse-square-root endpoint
/// singularity by the substitution named in `endpoint`.
pub fn integrate_segment_with<F>(f: F, a: f64, b: f64, endpoint: Endpoint, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    validate(a, b, tol)?;
    match endpoint {
        Endpoint::Regular => adaptive(&f, a, b, tol),
        Endpoint::SqrtLower => {
            let g = |t: f64| f(a + t * t) * (2.0 * t);
            adaptive(&g, 0.0, (b - a).sqrt(), tol)
        }
        Endpoint::SqrtUpper => {
            let g = |t: f64| f(b - t * t) * (2.0 * t);
            adaptive(&g, 0.0, (b - a).sqrt(), tol)
        }
    }
}

/// `∫ₐ^∞ f(x) dx` for an integrand that eventually decays at least as fast
/// as `exp(−x/decay_scale)`.
///
/// The half-line is covered by panels of width `d, 2d, 4d, …` with
/// `d = decay_scale`. Summation stops once a panel lying beyond `a + 15d`
/// contributes less than `tol/2` (or less than round-off of the running
/// total); that panel's magnitude is added to the error estimate as the
/// truncation bound.
pub fn integrate_tail<F>(f: F, a: f64, decay_scale: f64, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    if !(decay_scale > 0.0 && decay_scale.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "decay_scale must be positive, got {decay_scale}"
        )));
    }
    validate(a, a + decay_scale, tol)?;

    let mut total = QuadratureResult::ZERO;
    let mut start = a;
    let mut width = decay_scale;
    for k in 0..MAX_TAIL_PANELS {
        let end = start + width;
        let budget = tol * 0.5f64.powi(k as i32 + 2);
        let panel = match integrate_segment(&f, start, end, budget) {
            Ok(p) => p,
            Err(Error::NoConvergence { best }) => {
                total.accumulate(&best);
                return Err(Error::NoConvergence { best: total });
            }
            Err(e) => return Err(e),
        };
        total.accumulate(&panel);
        let size = panel.value.norm();
        let past_bulk = end >= a + 15.0 * decay_scale;
        if past_bulk && (size <= 0.5 * tol || size <= f64::EPSILON * total.value.norm()) {
            total.abs_error += size;
            return Ok(total);
        }
        start = end;
        width *= 2.0;
    }
    Err(Error::NoConvergence { best: total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn oscillatory_exponential() {
        let r = integrate_segment(|x| Complex64::new(0.0, x).exp(), 0.0, 1.0, 1e-10).unwrap();
        assert_abs_diff_eq!(r.value.re, 1f64.sin(), epsilon = 1e-10);
        assert_abs_diff_eq!(r.value.im, 1.0 - 1f64.cos(), epsilon = 1e-10);
        assert!(r.abs_error <= 1e-10);
    }

    #[test]
    fn constant() {
        let r = integrate_segment(|_| c(1.0), 0.0, 2.0, 1e-10).unwrap();
        assert_abs_diff_eq!(r.value.re, 2.0, epsilon = 1e-14);
        assert_eq!(r.evaluations, 15);
    }

    #[test]
    fn inverse_sqrt_upper_endpoint() {
        let f = |x: f64| c(1.0 / (1.0 - x).sqrt());
        let r = integrate_segment_with(f, 0.0, 1.0, Endpoint::SqrtUpper, 1e-8).unwrap();
        assert_abs_diff_eq!(r.value.re, 2.0, epsilon = 1e-8);
        // the substituted integrand is constant: a single rule suffices
        assert_eq!(r.evaluations, 15);
    }

    #[test]
    fn inverse_sqrt_lower_endpoint() {
        let f = |x: f64| c(x.cos() / (x - 1.0).sqrt());
        let r = integrate_segment_with(f, 1.0, 2.0, Endpoint::SqrtLower, 1e-10).unwrap();
        // ∫₀¹ 2cos(1+t²) dt, reference by composite Simpson on the smooth form
        let n = 20_000;
        let h = 1.0 / n as f64;
        let g = |t: f64| 2.0 * (1.0 + t * t).cos();
        let simpson: f64 = (0..n)
            .map(|i| {
                let t = i as f64 * h;
                h / 6.0 * (g(t) + 4.0 * g(t + 0.5 * h) + g(t + h))
            })
            .sum();
        assert_abs_diff_eq!(r.value.re, simpson, epsilon = 1e-10);
    }

    #[test]
    fn exponential_tail() {
        let r = integrate_tail(|x| c((-x).exp()), 0.0, 1.0, 1e-10).unwrap();
        assert_abs_diff_eq!(r.value.re, 1.0, epsilon = 1e-10);
        assert!(r.abs_error <= 1e-10);
    }

    #[test]
    fn gamma_two_tail() {
        let r = integrate_tail(|x| c(x * (-2.0 * x).exp()), 0.0, 0.5, 1e-10).unwrap();
        assert_abs_diff_eq!(r.value.re, 0.25, epsilon = 1e-10);
    }

    #[test]
    fn near_field_kernel_tail() {
        let z = 0.1;
        let r = integrate_tail(|x| c(x * x * (-2.0 * x * z).exp()), 0.0, 1.0 / (2.0 * z), 1e-8).unwrap();
        assert_abs_diff_eq!(r.value.re, 250.0, epsilon = 1e-8);
    }

    #[test]
    fn tail_without_decay_fails() {
        let err = integrate_tail(|_| c(1.0), 0.0, 1.0, 1e-8).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
    }

    #[test]
    fn nonintegrable_singularity_fails_with_estimate() {
        let err = integrate_segment(|x| c(1.0 / x), 0.0, 1.0, 1e-10).unwrap_err();
        match err {
            Error::NoConvergence { best } => assert!(best.value.re > 10.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_limits() {
        assert!(integrate_segment(|_| c(1.0), 1.0, 0.0, 1e-8).is_err());
        assert!(integrate_segment(|_| c(1.0), 0.0, 1.0, 0.0).is_err());
        assert!(integrate_tail(|_| c(1.0), 0.0, -1.0, 1e-8).is_err());
    }
}
