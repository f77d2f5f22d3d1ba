//! Spontaneous-decay rates and line shifts of a two-level emitter near
//! absorbing, dispersive dielectric bodies.
//!
//! Every quantity is dimensionless: frequencies are measured in units of the
//! medium resonance `ω_T`, distances through `q·z = ω z / c` (planar) or
//! `R ω / c` (spherical), rates as `Γ/Γ₀` and shifts as `δω/Γ₀`, where `Γ₀`
//! is the free-space decay rate of the same transition.
//!
//! Three geometries are covered:
//!
//! * [`planar`]: emitter above an absorbing half-space, by Sommerfeld-integral
//!   quadrature or by its small-distance expansion.
//! * [`real_cavity`]: emitter at the centre of an empty spherical cavity cut
//!   into bulk dielectric.
//! * [`virtual_cavity`]: Clausius–Mossotti local-field model in bulk.

pub mod dipole;
pub mod error;
pub mod medium;
pub mod planar;
pub mod quadrature;
pub mod real_cavity;
pub mod virtual_cavity;

pub use num_complex::Complex64;

pub use dipole::DipoleConfig;
pub use error::{Error, Result};
pub use medium::{lorentz_permittivity, refractive_index, ComplexPermittivity, RefractiveIndex};

pub use planar::{Method, PlanarConfig, ReflectionTensor};
pub use quadrature::QuadratureResult;
pub use real_cavity::SphericalConfig;
pub use virtual_cavity::VirtualCavityRate;

/// Outcome of a single rate (and optionally line-shift) evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    /// `Γ/Γ₀`.
    pub gamma: f64,
    /// `δω/Γ₀`, when the geometry provides a shift.
    pub shift: Option<f64>,
    /// Transverse part `Γ⊥/Γ₀`.
    pub transverse: f64,
    /// Longitudinal part `Γ∥/Γ₀` (only non-zero in the virtual-cavity model).
    pub longitudinal: f64,
    pub method: &'static str,
    /// Absolute error estimate of `gamma`; zero for closed forms.
    pub error_estimate: f64,
}
