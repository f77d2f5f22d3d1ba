//! Shared fixtures for the benchmarks.

use decaykit_core::{ComplexPermittivity, Complex64, DipoleConfig, PlanarConfig, SphericalConfig};

/// Permittivity of the default Lorentz medium (`γ = 0.05`) at `omega`.
pub fn lorentz_eps(omega: f64) -> Complex64 {
    ComplexPermittivity::lorentz(0.05)
        .evaluate(omega)
        .expect("positive frequency")
}

pub fn planar(qz: f64, eps: Complex64) -> PlanarConfig {
    let dipole = DipoleConfig::isotropic(1.0).expect("valid dipole");
    PlanarConfig::new(qz, eps, dipole).expect("valid planar config")
}

pub fn sphere(size: f64, eps: Complex64) -> SphericalConfig {
    SphericalConfig::new(size, eps).expect("valid sphere config")
}
