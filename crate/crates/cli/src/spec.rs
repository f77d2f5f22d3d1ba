//! Scan specifications and their validation.

use std::fmt;
use std::str::FromStr;

use decaykit_core::{planar, ComplexPermittivity, Complex64, DipoleConfig};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Planar,
    RealCavity,
    VirtualCavity,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Self::Planar => "planar",
            Self::RealCavity => "real-cavity",
            Self::VirtualCavity => "virtual-cavity",
        }
    }
}

impl FromStr for Model {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "planar" => Ok(Self::Planar),
            "real-cavity" => Ok(Self::RealCavity),
            "virtual-cavity" => Ok(Self::VirtualCavity),
            _ => Err(CliError::Usage(format!(
                "unknown model '{s}' (planar, real-cavity, virtual-cavity)"
            ))),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Scanned quantity. `Index` is a real refractive index `n` with `ε = n²`,
/// bypassing the permittivity model; handy for nonabsorbing checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// `ω_A/ω_T`.
    Omega,
    /// `qz = ω_A z / c` (planar only).
    Distance,
    /// `R ω_A / c` (cavity models only).
    Radius,
    Index,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Self::Omega => "omega",
            Self::Distance => "distance",
            Self::Radius => "radius",
            Self::Index => "index",
        }
    }
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "omega" => Ok(Self::Omega),
            "distance" => Ok(Self::Distance),
            "radius" => Ok(Self::Radius),
            "index" => Ok(Self::Index),
            _ => Err(CliError::Usage(format!(
                "unknown axis '{s}' (omega, distance, radius, index)"
            ))),
        }
    }
}

/// `start:stop:points`, inclusive at both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Range {
    pub fn new(start: f64, stop: f64, points: usize) -> Result<Self, CliError> {
        if !(start.is_finite() && stop.is_finite()) || start >= stop {
            return Err(CliError::Usage(format!(
                "range needs finite start < stop, got {start}:{stop}"
            )));
        }
        if points < 2 {
            return Err(CliError::Usage(format!("range needs at least 2 points, got {points}")));
        }
        Ok(Self { start, stop, points })
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|k| if k + 1 == self.points { self.stop } else { self.start + step * k as f64 })
            .collect()
    }
}

impl FromStr for Range {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CliError::Usage(format!("range must look like start:stop:points, got '{s}'"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let start = parts[0].trim().parse().map_err(|_| bad())?;
        let stop = parts[1].trim().parse().map_err(|_| bad())?;
        let points = parts[2].trim().parse().map_err(|_| bad())?;
        Self::new(start, stop, points)
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.points)
    }
}

/// Evaluation method flag; which ones apply depends on the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodFlag {
    Quadrature,
    Asymptotic,
    Leading,
    Exact,
    SmallRadius,
    /// The only method of the virtual-cavity model.
    Expansion,
}

impl MethodFlag {
    pub fn name(self) -> &'static str {
        match self {
            Self::Quadrature => "quadrature",
            Self::Asymptotic => "asymptotic",
            Self::Leading => "leading",
            Self::Exact => "exact",
            Self::SmallRadius => "small-radius",
            Self::Expansion => "expansion",
        }
    }

    pub fn default_for(model: Model) -> Self {
        match model {
            Model::Planar => Self::Quadrature,
            Model::RealCavity => Self::Exact,
            Model::VirtualCavity => Self::Expansion,
        }
    }

    fn allowed(self, model: Model) -> bool {
        matches!(
            (model, self),
            (Model::Planar, Self::Quadrature | Self::Asymptotic | Self::Leading)
                | (Model::RealCavity, Self::Exact | Self::SmallRadius)
                | (Model::VirtualCavity, Self::Expansion)
        )
    }

    pub(crate) fn planar(self) -> Option<planar::Method> {
        match self {
            Self::Quadrature => Some(planar::Method::Quadrature),
            Self::Asymptotic => Some(planar::Method::Asymptotic),
            Self::Leading => Some(planar::Method::Leading),
            _ => None,
        }
    }
}

impl FromStr for MethodFlag {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quadrature" => Ok(Self::Quadrature),
            "asymptotic" => Ok(Self::Asymptotic),
            "leading" => Ok(Self::Leading),
            "exact" => Ok(Self::Exact),
            "small-radius" => Ok(Self::SmallRadius),
            "expansion" => Ok(Self::Expansion),
            _ => Err(CliError::Usage(format!("unknown method '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(CliError::Usage(format!("unknown format '{s}' (csv, json)"))),
        }
    }
}

/// One curve: a model evaluated along one axis with everything else fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub model: Model,
    pub axis: Axis,
    pub range: Range,
    pub permittivity: ComplexPermittivity,
    /// `ω_A/ω_T` when it is not the scanned axis.
    pub omega: f64,
    /// Planar distance `qz` when it is not scanned.
    pub qz: Option<f64>,
    /// Cavity size `R ω_A / c` when it is not scanned.
    pub size: Option<f64>,
    /// Dipole direction (normalised internally).
    pub dipole: [f64; 3],
    pub method: MethodFlag,
    pub include_integral_term: bool,
    pub omega_max: f64,
    pub tol: f64,
    /// Label written to the `curve` column.
    pub curve: String,
}

impl ScanSpec {
    pub const DEFAULT_TOL: f64 = 1e-8;
    pub const DEFAULT_OMEGA_MAX: f64 = 50.0;

    /// A spec with default fixed parameters; callers fill in what they need.
    pub fn new(model: Model, axis: Axis, range: Range) -> Self {
        Self {
            model,
            axis,
            range,
            permittivity: ComplexPermittivity::lorentz(0.05),
            omega: 1.0,
            qz: None,
            size: None,
            dipole: [0.0, 0.0, 1.0],
            method: MethodFlag::default_for(model),
            include_integral_term: false,
            omega_max: Self::DEFAULT_OMEGA_MAX,
            tol: Self::DEFAULT_TOL,
            curve: model.name().to_string(),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        Range::new(self.range.start, self.range.stop, self.range.points)?;
        if !self.method.allowed(self.model) {
            return usage(format!(
                "method '{}' does not apply to the {} model",
                self.method.name(),
                self.model
            ));
        }
        match (self.model, self.axis) {
            (Model::Planar, Axis::Radius) => return usage("planar model has no radius axis".into()),
            (Model::RealCavity | Model::VirtualCavity, Axis::Distance) => {
                return usage("cavity models have no distance axis".into())
            }
            _ => {}
        }
        if self.range.start <= 0.0 {
            return usage(format!("{} axis must stay positive", self.axis.name()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return usage(format!("tol must be positive, got {}", self.tol));
        }
        if self.axis != Axis::Omega && !(self.omega > 0.0 && self.omega.is_finite()) {
            return usage(format!("omega must be positive, got {}", self.omega));
        }
        let positive = |name: &str, v: Option<f64>| match v {
            Some(x) if x > 0.0 && x.is_finite() => Ok(()),
            Some(x) => usage(format!("{name} must be positive, got {x}")),
            None => usage(format!("--{name} is required for this scan")),
        };
        match self.model {
            Model::Planar => {
                if self.axis != Axis::Distance {
                    positive("qz", self.qz)?;
                }
                DipoleConfig::from_direction(1.0, self.dipole)?;
                if self.include_integral_term {
                    if self.permittivity.is_point_valued() {
                        return usage("the integral term needs a dispersive permittivity model".into());
                    }
                    if self.axis == Axis::Index {
                        return usage("the integral term is undefined on the index axis".into());
                    }
                    if !(self.omega_max > 0.0 && self.omega_max.is_finite()) {
                        return usage(format!("omega-max must be positive, got {}", self.omega_max));
                    }
                }
            }
            Model::RealCavity | Model::VirtualCavity => {
                if self.axis != Axis::Radius {
                    positive("size", self.size)?;
                }
            }
        }
        Ok(())
    }
}

/// Parses `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Usage(format!("expected 're' or 're,im', got '{s}'"));
    let mut parts = s.split(',').map(|p| p.trim().parse::<f64>());
    let re = parts.next().ok_or_else(bad)?.map_err(|_| bad())?;
    let im = match parts.next() {
        Some(p) => p.map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

/// Parses `x,y,z`.
pub fn parse_dipole(s: &str) -> Result<[f64; 3], CliError> {
    let bad = || CliError::Usage(format!("dipole must be 'x,y,z', got '{s}'"));
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    <[f64; 3]>::try_from(v).map_err(|_| bad())
}
