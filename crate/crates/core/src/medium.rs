//! Complex permittivity models and the refractive index derived from them.
//!
//! Frequencies are in units of the medium resonance `ω_T`.

use std::io::BufRead;

use num_complex::Complex64;

use crate::error::{ensure_finite, ensure_finite_complex, Error, Result};

/// `(0.46)²`, the oscillator strength of the single-resonance model.
pub const DEFAULT_COUPLING_SQ: f64 = 0.2116;

/// Single-resonance (Drude–Lorentz) permittivity
/// `ε(ω) = 1 + g / (1 − ω² − iγω)` with `ω` in units of `ω_T`.
pub fn lorentz_permittivity(omega: f64, coupling_sq: f64, gamma: f64) -> Result<Complex64> {
    ensure_finite("omega", omega)?;
    ensure_finite("coupling_sq", coupling_sq)?;
    ensure_finite("gamma", gamma)?;
    if omega <= 0.0 {
        return Err(Error::InvalidArgument(format!("omega must be positive, got {omega}")));
    }
    if gamma < 0.0 {
        return Err(Error::InvalidArgument(format!("gamma must be non-negative, got {gamma}")));
    }
    if coupling_sq <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "coupling_sq must be positive, got {coupling_sq}"
        )));
    }
    let denom = Complex64::new(1.0 - omega * omega, -gamma * omega);
    if denom == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidArgument(
            "undamped model evaluated exactly at resonance".into(),
        ));
    }
    Ok(1.0 + coupling_sq / denom)
}

/// Complex refractive index `n = η + iκ = √ε` on the principal branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefractiveIndex {
    pub n: Complex64,
}

impl RefractiveIndex {
    /// Real part `η`.
    pub fn eta(&self) -> f64 {
        self.n.re
    }

    /// Imaginary part `κ` (extinction coefficient).
    pub fn kappa(&self) -> f64 {
        self.n.im
    }
}

/// Principal square root of `ε`. For passive media (`Im ε ≥ 0`) both
/// `Re n` and `Im n` are non-negative.
pub fn refractive_index(eps: Complex64) -> Result<RefractiveIndex> {
    ensure_finite_complex("eps", eps)?;
    // -0.0 + 0.0 == +0.0, keeps a negative real ε on the +i branch
    let eps = Complex64::new(eps.re, eps.im + 0.0);
    Ok(RefractiveIndex { n: eps.sqrt() })
}

/// Tabulated `ε(ω)`, linearly interpolated in real and imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct PermittivityTable {
    omega: Vec<f64>,
    eps: Vec<Complex64>,
}

impl PermittivityTable {
    pub fn new(samples: Vec<(f64, Complex64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidArgument(
                "permittivity table needs at least two samples".into(),
            ));
        }
        for (w, e) in &samples {
            ensure_finite("table frequency", *w)?;
            ensure_finite_complex("table permittivity", *e)?;
        }
        if samples.windows(2).any(|p| p[1].0 <= p[0].0) {
            return Err(Error::InvalidArgument(
                "table frequencies must be strictly increasing".into(),
            ));
        }
        let (omega, eps) = samples.into_iter().unzip();
        Ok(Self { omega, eps })
    }

    /// Reads `omega eps_real eps_imag` rows; blank lines and `#` comments
    /// are skipped.
    pub fn parse<R: BufRead>(reader: R) -> Result<Self> {
        let mut samples = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.map_err(|e| Error::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 3 columns, found {}", fields.len()),
                });
            }
            let mut values = [0.0; 3];
            for (slot, field) in values.iter_mut().zip(&fields) {
                *slot = field.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("not a number: {field:?}"),
                })?;
            }
            samples.push((values[0], Complex64::new(values[1], values[2])));
        }
        Self::new(samples)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.omega[0], self.omega[self.omega.len() - 1])
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.omega.iter().copied().zip(self.eps.iter().copied())
    }

    pub fn interpolate(&self, omega: f64) -> Result<Complex64> {
        let (min, max) = self.range();
        if !(min..=max).contains(&omega) {
            return Err(Error::OutOfRange { omega, min, max });
        }
        let hi = self.omega.partition_point(|&w| w < omega).max(1);
        let lo = hi - 1;
        let t = (omega - self.omega[lo]) / (self.omega[hi] - self.omega[lo]);
        Ok(self.eps[lo] + (self.eps[hi] - self.eps[lo]) * t)
    }
}

/// A frequency-dependent permittivity model.
#[derive(Debug, Clone, PartialEq)]
pub enum ComplexPermittivity {
    Lorentz { coupling_sq: f64, gamma: f64 },
    Constant(Complex64),
    Table(PermittivityTable),
}

impl ComplexPermittivity {
    pub fn lorentz(gamma: f64) -> Self {
        Self::Lorentz {
            coupling_sq: DEFAULT_COUPLING_SQ,
            gamma,
        }
    }

    /// `ε(ω)`, rejecting values that would describe a gain medium.
    pub fn evaluate(&self, omega: f64) -> Result<Complex64> {
        let eps = match self {
            Self::Lorentz { coupling_sq, gamma } => lorentz_permittivity(omega, *coupling_sq, *gamma)?,
            Self::Constant(eps) => {
                ensure_finite_complex("eps", *eps)?;
                *eps
            }
            Self::Table(table) => table.interpolate(omega)?,
        };
        if eps.im < 0.0 {
            return Err(Error::ActiveMedium { omega, im: eps.im });
        }
        Ok(eps)
    }

    pub fn index(&self, omega: f64) -> Result<RefractiveIndex> {
        refractive_index(self.evaluate(omega)?)
    }

    /// True when the model describes a single frequency-independent value,
    /// which cannot support integrals over frequency.
    pub fn is_point_valued(&self) -> bool {
        matches!(self, Self::Constant(_))
    }
}
