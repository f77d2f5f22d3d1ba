//! Parameter sets reproducing the published figures.
//!
//! The figure data themselves are not available, so the scan ranges are
//! chosen here:
//!
//! * `fig1-*` / `fig2-*`: emitter above a Lorentz half-space, dipole normal to
//!   the surface, `γ = 0.05 ω_T`. The left variants scan `ω_A/ω_T` over
//!   `[0.5, 1.5]` at `qz = 2πz/λ_A ∈ {0.1, 0.3}`; the right variants scan
//!   `qz` over `[0.02, 0.5]` at `ω_A/ω_T ∈ {1, 0.5}`. `fig1` reports the
//!   rate, `fig2` the line shift including the frequency-integral term.
//! * `fig3` / `fig4`: real- and virtual-cavity rates (the virtual cavity's
//!   transverse part in `gamma_perp`) for `R = 0.02 λ_A` and `R = 0.2 λ_A`,
//!   `γ ∈ {0.05, 0.2} ω_T`, scanning `ω_A/ω_T` over `[0.5, 1.5]`.
//!
//! The medium damping is a property of the medium, so `γ` stays fixed in
//! units of `ω_T` while `ω_A` is scanned.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use decaykit_core::{ComplexPermittivity, SphericalConfig};

use crate::scan::{run_scans, ScanTable};
use crate::spec::{Axis, MethodFlag, Model, Range, ScanSpec};
use crate::CliError;

pub const GAMMA: f64 = 0.05;
pub const OMEGA_RANGE: (f64, f64) = (0.5, 1.5);
pub const DISTANCE_RANGE: (f64, f64) = (0.02, 0.5);
pub const DEFAULT_OMEGA_POINTS: usize = 101;
pub const DEFAULT_DISTANCE_POINTS: usize = 97;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig1Left,
    Fig1Right,
    Fig2Left,
    Fig2Right,
    Fig3,
    Fig4,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Self::Fig1Left,
        Self::Fig1Right,
        Self::Fig2Left,
        Self::Fig2Right,
        Self::Fig3,
        Self::Fig4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig1Left => "fig1-left",
            Self::Fig1Right => "fig1-right",
            Self::Fig2Left => "fig2-left",
            Self::Fig2Right => "fig2-right",
            Self::Fig3 => "fig3",
            Self::Fig4 => "fig4",
        }
    }
}

impl FromStr for Preset {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|p| p.name()).collect();
            CliError::Usage(format!("unknown preset '{s}' ({})", names.join(", ")))
        })
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Overrides accepted by every preset.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetOptions {
    /// Points per curve; `None` keeps the preset default.
    pub points: Option<usize>,
    pub tol: f64,
    /// Frequency-integral term in the `fig2` shifts.
    pub include_integral_term: bool,
    pub omega_max: f64,
}

impl Default for PresetOptions {
    fn default() -> Self {
        Self {
            points: None,
            tol: ScanSpec::DEFAULT_TOL,
            include_integral_term: true,
            omega_max: ScanSpec::DEFAULT_OMEGA_MAX,
        }
    }
}

fn planar_specs(preset: Preset, opts: &PresetOptions) -> Result<Vec<ScanSpec>, CliError> {
    let left = matches!(preset, Preset::Fig1Left | Preset::Fig2Left);
    let shift = matches!(preset, Preset::Fig2Left | Preset::Fig2Right);
    let mut specs = Vec::new();
    for fixed in if left { [0.1, 0.3] } else { [1.0, 0.5] } {
        let (axis, (lo, hi), points) = if left {
            (Axis::Omega, OMEGA_RANGE, DEFAULT_OMEGA_POINTS)
        } else {
            (Axis::Distance, DISTANCE_RANGE, DEFAULT_DISTANCE_POINTS)
        };
        let mut s = ScanSpec::new(Model::Planar, axis, Range::new(lo, hi, opts.points.unwrap_or(points))?);
        s.permittivity = ComplexPermittivity::lorentz(GAMMA);
        s.dipole = [0.0, 0.0, 1.0];
        s.method = MethodFlag::Quadrature;
        s.tol = opts.tol;
        s.include_integral_term = shift && opts.include_integral_term;
        s.omega_max = opts.omega_max;
        if left {
            s.qz = Some(fixed);
            s.curve = format!("qz={fixed}");
        } else {
            s.omega = fixed;
            s.curve = format!("omega_a={fixed}");
        }
        specs.push(s);
    }
    Ok(specs)
}

fn cavity_specs(preset: Preset, opts: &PresetOptions) -> Result<Vec<ScanSpec>, CliError> {
    let fraction = if preset == Preset::Fig3 { 0.02 } else { 0.2 };
    let size = SphericalConfig::size_from_wavelength_fraction(fraction);
    let points = opts.points.unwrap_or(DEFAULT_OMEGA_POINTS);
    let mut specs = Vec::new();
    for gamma in [0.05, 0.2] {
        for model in [Model::RealCavity, Model::VirtualCavity] {
            let mut s = ScanSpec::new(model, Axis::Omega, Range::new(OMEGA_RANGE.0, OMEGA_RANGE.1, points)?);
            s.permittivity = ComplexPermittivity::lorentz(gamma);
            s.size = Some(size);
            s.tol = opts.tol;
            s.curve = format!("{} gamma={gamma}", model.name());
            specs.push(s);
        }
    }
    Ok(specs)
}

pub fn preset_specs(preset: Preset, opts: &PresetOptions) -> Result<Vec<ScanSpec>, CliError> {
    match preset {
        Preset::Fig3 | Preset::Fig4 => cavity_specs(preset, opts),
        _ => planar_specs(preset, opts),
    }
}

pub fn run_preset(preset: Preset, opts: &PresetOptions) -> Result<ScanTable, CliError> {
    let specs = preset_specs(preset, opts)?;
    let mut metadata = BTreeMap::new();
    metadata.insert("preset".to_string(), preset.name().to_string());
    let gamma = if matches!(preset, Preset::Fig3 | Preset::Fig4) { 0.05 } else { GAMMA };
    let kappa = ComplexPermittivity::lorentz(gamma).index(1.0)?.kappa();
    metadata.insert("kappa_at_omega_t".to_string(), kappa.to_string());
    run_scans(&specs, metadata)
}
