//! Real-cavity model: emitter at the centre of an empty sphere of radius `R`
//! carved into a bulk dielectric.
//!
//! The rate is set by the lowest electric multipole reflection coefficient,
//! `Γ/Γ₀ = 1 + Re C₁ᴺ`, and is purely transverse.

use num_complex::Complex64;

use crate::error::{ensure_finite, ensure_finite_complex, Error, Result};
use crate::medium::{refractive_index, RefractiveIndex};
use crate::RateResult;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest supported size parameter `R ω/c`.
pub const MAX_SIZE: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalConfig {
    /// Size parameter `R ω_A / c`.
    pub size: f64,
    /// Permittivity of the surrounding medium at `ω_A`.
    pub eps: Complex64,
    pub index: RefractiveIndex,
}

impl SphericalConfig {
    pub fn new(size: f64, eps: Complex64) -> Result<Self> {
        ensure_finite("size", size)?;
        ensure_finite_complex("eps", eps)?;
        if size <= 0.0 {
            return Err(Error::InvalidArgument(format!("size must be positive, got {size}")));
        }
        if eps.im < 0.0 {
            return Err(Error::ActiveMedium { omega: f64::NAN, im: eps.im });
        }
        Ok(Self {
            size,
            eps,
            index: refractive_index(eps)?,
        })
    }

    /// Size parameter for a radius given as a fraction of the transition
    /// wavelength, `R = fraction · λ_A`.
    pub fn size_from_wavelength_fraction(fraction: f64) -> f64 {
        std::f64::consts::TAU * fraction
    }
}

/// `sin z − z cos z`, by its Taylor series where the closed form cancels.
fn sin_minus_z_cos(z: f64) -> f64 {
    if z.abs() >= 0.5 {
        return z.sin() - z * z.cos();
    }
    // Σ (−1)^{k+1} 2k z^{2k+1} / (2k+1)!
    let z2 = z * z;
    let mut power = z * z2;
    let mut factorial = 6.0;
    let mut sum = 0.0;
    for k in 1..20 {
        let term = 2.0 * k as f64 * power / factorial;
        sum += if k % 2 == 1 { term } else { -term };
        if term.abs() < f64::EPSILON * sum.abs() {
            break;
        }
        power *= z2;
        factorial *= ((2 * k + 2) * (2 * k + 3)) as f64;
    }
    sum
}

/// Below this value of `size·max(1, |n|)` the coefficient is summed from its
/// Laurent series.
const SERIES_THRESHOLD: f64 = 0.2;
const SERIES_TERMS: usize = 40;

/// Generalised reflection coefficient `C₁ᴺ` for size parameter `z` and
/// medium index `n`.
///
/// Numerator and denominator are both multiplied by `n² − 1`, which makes
/// `n = 1` an exact zero instead of `0/∞`. For small cavities `C₁ᴺ ~ z⁻³` is
/// dominated by its imaginary part while the rate needs the real part, so
/// there the Laurent series in `z` is summed instead of the closed form;
/// for real `n` this keeps the real part free of round-off from the
/// imaginary one.
pub fn c1n(size: f64, n: Complex64) -> Result<Complex64> {
    ensure_finite("size", size)?;
    ensure_finite_complex("n", n)?;
    if size <= 0.0 {
        return Err(Error::InvalidArgument(format!("size must be positive, got {size}")));
    }
    if size > MAX_SIZE {
        return Err(Error::InvalidArgument(format!(
            "size {size} exceeds the supported maximum {MAX_SIZE}"
        )));
    }
    let rescale = (n - 1.0) * (n + 1.0);
    if rescale == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::default());
    }
    if size * n.norm().max(1.0) < SERIES_THRESHOLD {
        c1n_series(size, n, rescale)
    } else {
        c1n_closed(size, n, rescale)
    }
}

/// The rescaled ratio, with the denominator regrouped as
/// `(n² − 1)(1 − inz)(sin z − z cos z) − z³n²(cos z − in sin z)` so that the
/// `O(z)` and `O(z²)` cancellations happen analytically.
fn c1n_closed(z: f64, n: Complex64, rescale: Complex64) -> Result<Complex64> {
    let (sin, cos) = z.sin_cos();
    let z3 = z * z * z;
    let n2 = n * n;

    let numerator =
        rescale * (I + z * (n + 1.0) - I * z * z * n - z3 * n2 / (n + 1.0)) * Complex64::new(0.0, z).exp();
    let first = rescale * (1.0 - I * n * z) * sin_minus_z_cos(z);
    let second = z3 * n2 * (cos - I * n * sin);
    let denominator = first - second;

    if denominator.norm() <= 4.0 * f64::EPSILON * (first.norm() + second.norm()) {
        return Err(Error::Pole {
            what: "cavity resonance in C1N denominator",
            size: z,
            n,
        });
    }
    Ok(numerator / denominator)
}

/// `C₁ᴺ = z⁻³ Σ q_k z^k`, with `q` the quotient of the numerator series and
/// the denominator series divided by `z³`.
fn c1n_series(z: f64, n: Complex64, rescale: Complex64) -> Result<Complex64> {
    const K: usize = SERIES_TERMS;
    let n2 = n * n;

    let mut factorial = [1.0f64; K + 4];
    for k in 1..factorial.len() {
        factorial[k] = factorial[k - 1] * k as f64;
    }
    // e^{iz}
    let exp_iz: Vec<Complex64> = (0..K).map(|k| I.powu(k as u32) / factorial[k]).collect();
    // i + (n+1)z − inz² − n²z³/(n+1)
    let poly = [I, n + 1.0, -I * n, -n2 / (n + 1.0)];
    let numerator: Vec<Complex64> = (0..K)
        .map(|k| {
            let conv: Complex64 = (0..=k.min(3)).map(|j| poly[j] * exp_iz[k - j]).sum();
            rescale * conv
        })
        .collect();

    // (sin z − z cos z)/z³ = Σ_m (−1)^m 2(m+1)/(2m+3)! z^{2m}
    let smc: Vec<Complex64> = (0..K)
        .map(|k| {
            if k % 2 == 1 {
                return Complex64::default();
            }
            let m = k / 2;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::new(sign * 2.0 * (m + 1) as f64 / factorial[2 * m + 3], 0.0)
        })
        .collect();
    let trig = |k: usize| -> Complex64 {
        // cos z − in sin z
        let sign = if (k / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
        if k.is_multiple_of(2) {
            Complex64::new(sign / factorial[k], 0.0)
        } else {
            -I * n * (sign / factorial[k])
        }
    };
    let denominator: Vec<Complex64> = (0..K)
        .map(|k| {
            let lowered = if k == 0 { smc[0] } else { smc[k] - I * n * smc[k - 1] };
            rescale * lowered - n2 * trig(k)
        })
        .collect();

    let lead = denominator[0];
    if lead.norm() <= 4.0 * f64::EPSILON * (rescale.norm() + n2.norm()) {
        return Err(Error::Pole {
            what: "2 n^2 + 1 = 0",
            size: z,
            n,
        });
    }
    let mut quotient = vec![Complex64::default(); K];
    for k in 0..K {
        let acc: Complex64 = (1..=k).map(|j| denominator[j] * quotient[k - j]).sum();
        quotient[k] = (numerator[k] - acc) / lead;
    }
    // The lowest coefficients carry z⁻³..z⁰; recomputing them in closed form keeps
    // rounding in their (often vanishing) real parts from being amplified by 1/z³.
    let pole = 2.0 * n2 + 1.0;
    quotient[0] = -3.0 * I * rescale / pole;
    quotient[1] = Complex64::default();
    quotient[2] = -9.0 * I * rescale * (4.0 * n2 + 1.0) / (5.0 * pole * pole);
    quotient[3] = (n - 1.0) * ((((9.0 * n + 5.0) * n + 5.0) * n + 1.0) * n + 1.0) / (pole * pole);
    let sum = quotient.iter().rev().fold(Complex64::default(), |acc, q| acc * z + q);
    Ok(sum / (z * z * z))
}

/// `Γ/Γ₀ = 1 + Re C₁ᴺ`.
pub fn real_cavity_rate_exact(cfg: &SphericalConfig) -> Result<RateResult> {
    let gamma = 1.0 + c1n(cfg.size, cfg.index.n)?.re;
    Ok(RateResult {
        gamma,
        shift: None,
        transverse: gamma,
        longitudinal: 0.0,
        method: "exact",
        error_estimate: 0.0,
    })
}

/// The four contributions of the small-cavity expansion, in units of `Γ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallRadiusTerms {
    /// `∝ (c/ω_A R)³`, non-radiative transfer to the medium.
    pub cubic: f64,
    /// `∝ c/ω_A R`.
    pub inverse: f64,
    /// Radiative term proportional to `η`.
    pub eta: f64,
    /// Correction proportional to `−κ ε_I`.
    pub kappa: f64,
}

impl SmallRadiusTerms {
    pub fn total(&self) -> f64 {
        self.cubic + self.inverse + self.eta + self.kappa
    }
}

pub fn small_radius_terms(cfg: &SphericalConfig) -> Result<SmallRadiusTerms> {
    let eps = cfg.eps;
    let (er, ei) = (eps.re, eps.im);
    let abs2 = eps.norm_sqr();
    let d2 = (2.0 * eps + 1.0).norm_sqr();
    if d2 == 0.0 {
        return Err(Error::Pole {
            what: "2 eps + 1 = 0",
            size: cfg.size,
            n: cfg.index.n,
        });
    }
    let d4 = d2 * d2;
    let inv = 1.0 / cfg.size;
    Ok(SmallRadiusTerms {
        cubic: 9.0 * ei / d2 * inv.powi(3),
        inverse: 9.0 * ei * (28.0 * abs2 + 12.0 * er + 1.0) / (5.0 * d4) * inv,
        eta: 9.0 * cfg.index.eta() / d4 * (4.0 * abs2 * abs2 + 4.0 * er * abs2 + er * er - ei * ei),
        kappa: -9.0 * cfg.index.kappa() * ei / d4 * (4.0 * abs2 + 2.0 * er),
    })
}

/// Small-cavity expansion of the real-cavity rate, valid for `R ω_A/c ≪ 1`.
pub fn real_cavity_rate_small_radius(cfg: &SphericalConfig) -> Result<RateResult> {
    let gamma = small_radius_terms(cfg)?.total();
    Ok(RateResult {
        gamma,
        shift: None,
        transverse: gamma,
        longitudinal: 0.0,
        method: "small-radius",
        error_estimate: 0.0,
    })
}

/// Nonabsorbing limit `(3n²/(2n² + 1))² n`.
pub fn glauber_lewenstein(n: f64) -> Result<f64> {
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::InvalidArgument(format!("index must be real and positive, got {n}")));
    }
    let n2 = n * n;
    Ok((3.0 * n2 / (2.0 * n2 + 1.0)).powi(2) * n)
}
