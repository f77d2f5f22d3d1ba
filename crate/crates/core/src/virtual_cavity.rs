//! Virtual-cavity (Clausius–Mossotti) local-field model in absorbing bulk.
//!
//! The macroscopic field is averaged over a fictitious sphere of radius `R`;
//! for `|R ω_A n / c| ≪ 1` the rate splits into a transverse part and a
//! longitudinal part that only exists in absorbing media.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::real_cavity::SphericalConfig;
use crate::RateResult;

/// Above this `size·|n|` the small-radius expansion is outside its intended
/// range. Results are still returned, just flagged.
pub const VALIDITY_LIMIT: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VirtualCavityRate {
    pub transverse: f64,
    pub longitudinal: f64,
    pub total: f64,
    /// `size·|n|` exceeds [`VALIDITY_LIMIT`].
    pub beyond_validity: bool,
    /// The printed expansion went negative; the value is reported unclamped.
    pub negative: bool,
}

impl VirtualCavityRate {
    pub fn to_rate_result(&self) -> RateResult {
        RateResult {
            gamma: self.total,
            shift: None,
            transverse: self.transverse,
            longitudinal: self.longitudinal,
            method: "virtual-cavity",
            error_estimate: 0.0,
        }
    }
}

/// `Γ⊥/Γ₀`.
pub fn virtual_rate_transverse(cfg: &SphericalConfig) -> f64 {
    let eps = cfg.eps;
    let inv = 1.0 / cfg.size;
    let (eta, kappa) = (cfg.index.eta(), cfg.index.kappa());
    let local = ((eps + 2.0) / 3.0).norm_sqr();
    25.0 * eps.im / 54.0 * inv.powi(3)
        + eps.im * (eps.re + 2.0) * (8.0 / 15.0 * inv - 2.0 * kappa / 9.0)
        + eta * (local - 2.0 * eps.im * eps.im / 9.0)
}

/// `Γ∥/Γ₀`, identically zero without absorption.
pub fn virtual_rate_longitudinal(cfg: &SphericalConfig) -> Result<f64> {
    let eps = cfg.eps;
    if eps == Complex64::default() {
        return Err(Error::Pole {
            what: "eps = 0",
            size: cfg.size,
            n: cfg.index.n,
        });
    }
    Ok(4.0 * eps.im / (27.0 * eps.norm_sqr()) / cfg.size.powi(3))
}

pub fn virtual_rate_total(cfg: &SphericalConfig) -> Result<VirtualCavityRate> {
    let transverse = virtual_rate_transverse(cfg);
    let longitudinal = virtual_rate_longitudinal(cfg)?;
    let total = transverse + longitudinal;
    Ok(VirtualCavityRate {
        transverse,
        longitudinal,
        total,
        beyond_validity: cfg.size * cfg.index.n.norm() > VALIDITY_LIMIT,
        negative: total < 0.0,
    })
}

/// Nonabsorbing limit `((n²+2)/3)² n`.
pub fn lorentz_lorenz_rate(n: f64) -> Result<f64> {
    if !n.is_finite() || n <= 0.0 {
        return Err(Error::InvalidArgument(format!("refractive index must be positive, got {n}")));
    }
    let local = (n * n + 2.0) / 3.0;
    Ok(local * local * n)
}
