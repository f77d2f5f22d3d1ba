use crate::error::{ensure_finite, Error, Result};

/// Transition frequency and orientation of the emitter's dipole moment.
///
/// The orientation is stored as the squared direction cosines
/// `(μ_x², μ_y², μ_z²)/μ²`; only these weights enter the rate because the
/// reflection tensors of all supported geometries are diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleConfig {
    omega_a: f64,
    weights: [f64; 3],
}

impl DipoleConfig {
    const WEIGHT_SUM_TOL: f64 = 1e-9;

    pub fn new(omega_a: f64, weights: [f64; 3]) -> Result<Self> {
        ensure_finite("omega_a", omega_a)?;
        if omega_a <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "omega_a must be positive, got {omega_a}"
            )));
        }
        for w in weights {
            ensure_finite("dipole weight", w)?;
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::InvalidArgument(format!(
                    "dipole weight {w} outside [0, 1]"
                )));
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > Self::WEIGHT_SUM_TOL {
            return Err(Error::InvalidArgument(format!(
                "dipole weights must sum to 1, got {sum}"
            )));
        }
        Ok(Self { omega_a, weights })
    }

    /// Builds the weights from an (unnormalised) dipole direction.
    pub fn from_direction(omega_a: f64, direction: [f64; 3]) -> Result<Self> {
        let norm_sq: f64 = direction.iter().map(|c| c * c).sum();
        if !(norm_sq > 0.0 && norm_sq.is_finite()) {
            return Err(Error::InvalidArgument(
                "dipole direction must be a finite non-zero vector".into(),
            ));
        }
        Self::new(omega_a, direction.map(|c| c * c / norm_sq))
    }

    /// Dipole perpendicular to the interface (`μ = μ_z`).
    pub fn perpendicular(omega_a: f64) -> Result<Self> {
        Self::new(omega_a, [0.0, 0.0, 1.0])
    }

    /// Randomly oriented dipole, equal weights on all three axes.
    pub fn isotropic(omega_a: f64) -> Result<Self> {
        Self::new(omega_a, [1.0 / 3.0; 3])
    }

    pub fn omega_a(&self) -> f64 {
        self.omega_a
    }

    pub fn weights(&self) -> [f64; 3] {
        self.weights
    }

    /// `w_x + w_y`, the weight of the in-plane components.
    pub fn in_plane(&self) -> f64 {
        self.weights[0] + self.weights[1]
    }

    pub fn normal(&self) -> f64 {
        self.weights[2]
    }

    /// Transition wavelength `λ_A = 2πc/ω_A` in units of `c/ω_T`.
    pub fn wavelength(&self) -> f64 {
        std::f64::consts::TAU / self.omega_a
    }
}
