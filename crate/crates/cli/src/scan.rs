//! Evaluation of scans: one row per axis point, computed in parallel and
//! emitted in axis order.

use std::collections::BTreeMap;

use decaykit_core::planar::{planar_decay_rate, planar_line_shift, FrequencyIntegral};
use decaykit_core::real_cavity::{real_cavity_rate_exact, real_cavity_rate_small_radius};
use decaykit_core::virtual_cavity::virtual_rate_total;
use decaykit_core::{ComplexPermittivity, Complex64, DipoleConfig, PlanarConfig, SphericalConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::spec::{Axis, MethodFlag, Model, ScanSpec};
use crate::CliError;

pub const STATUS_OK: &str = "ok";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub curve: String,
    pub model: String,
    pub axis_value: f64,
    pub eps_real: Option<f64>,
    pub eps_imag: Option<f64>,
    pub gamma_over_gamma0: Option<f64>,
    /// Planar only.
    pub delta_omega_over_gamma0: Option<f64>,
    /// Virtual cavity only.
    pub gamma_perp: Option<f64>,
    pub gamma_par: Option<f64>,
    pub method: String,
    pub error_estimate: Option<f64>,
    /// `ok`, `warning: …` or `error: …`.
    pub status: String,
}

impl Row {
    pub fn is_error(&self) -> bool {
        self.status.starts_with("error")
    }

    fn failed(spec: &ScanSpec, x: f64, eps: Option<Complex64>, err: impl std::fmt::Display) -> Self {
        Self {
            curve: spec.curve.clone(),
            model: spec.model.name().into(),
            axis_value: x,
            eps_real: eps.map(|e| e.re),
            eps_imag: eps.map(|e| e.im),
            gamma_over_gamma0: None,
            delta_omega_over_gamma0: None,
            gamma_perp: None,
            gamma_par: None,
            method: spec.method.name().into(),
            error_estimate: None,
            status: format!("error: {err}"),
        }
    }
}

/// Rows plus `key → value` metadata describing how they were produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub metadata: BTreeMap<String, String>,
    pub rows: Vec<Row>,
}

impl ScanTable {
    pub fn has_errors(&self) -> bool {
        self.rows.iter().any(Row::is_error)
    }

    pub fn curve<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a Row> + 'a {
        self.rows.iter().filter(move |r| r.curve == label)
    }
}

pub fn describe_permittivity(model: &ComplexPermittivity) -> String {
    match model {
        ComplexPermittivity::Lorentz { coupling_sq, gamma } => {
            format!("lorentz(coupling_sq={coupling_sq}, gamma={gamma})")
        }
        ComplexPermittivity::Constant(eps) => format!("constant({}, {})", eps.re, eps.im),
        ComplexPermittivity::Table(t) => {
            let (lo, hi) = t.range();
            format!("table({} points, omega in [{lo}, {hi}])", t.samples().count())
        }
    }
}

/// Parameter summary of one spec, as `key → value`.
pub fn spec_metadata(spec: &ScanSpec) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    m.insert("model".into(), spec.model.name().into());
    m.insert("axis".into(), spec.axis.name().into());
    m.insert("range".into(), spec.range.to_string());
    m.insert("method".into(), spec.method.name().into());
    m.insert("tol".into(), spec.tol.to_string());
    if spec.axis != Axis::Index {
        m.insert("permittivity".into(), describe_permittivity(&spec.permittivity));
    }
    if spec.axis != Axis::Omega {
        m.insert("omega_a".into(), spec.omega.to_string());
        if spec.axis != Axis::Index {
            if let Ok(idx) = spec.permittivity.index(spec.omega) {
                m.insert("kappa_at_omega_a".into(), idx.kappa().to_string());
            }
        }
    }
    if spec.axis != Axis::Index {
        if let Ok(idx) = spec.permittivity.index(1.0) {
            m.insert("kappa_at_omega_t".into(), idx.kappa().to_string());
        }
    }
    match spec.model {
        Model::Planar => {
            if let Some(qz) = spec.qz.filter(|_| spec.axis != Axis::Distance) {
                m.insert("qz".into(), qz.to_string());
            }
            let [x, y, z] = spec.dipole;
            m.insert("dipole".into(), format!("{x},{y},{z}"));
            m.insert("include_integral_term".into(), spec.include_integral_term.to_string());
            if spec.include_integral_term {
                m.insert("omega_max".into(), spec.omega_max.to_string());
            }
        }
        Model::RealCavity | Model::VirtualCavity => {
            if let Some(size) = spec.size.filter(|_| spec.axis != Axis::Radius) {
                m.insert("size".into(), size.to_string());
            }
        }
    }
    m
}

fn evaluate(spec: &ScanSpec, x: f64) -> Row {
    let omega = if spec.axis == Axis::Omega { x } else { spec.omega };
    let eps = match spec.axis {
        Axis::Index => Ok(Complex64::new(x * x, 0.0)),
        _ => spec.permittivity.evaluate(omega),
    };
    let eps = match eps {
        Ok(e) => e,
        Err(e) => return Row::failed(spec, x, None, e),
    };
    let computed = match spec.model {
        Model::Planar => planar_row(spec, x, omega, eps),
        Model::RealCavity => real_cavity_row(spec, x, eps),
        Model::VirtualCavity => virtual_cavity_row(spec, x, eps),
    };
    computed.unwrap_or_else(|e| Row::failed(spec, x, Some(eps), e))
}

fn base_row(spec: &ScanSpec, x: f64, eps: Complex64) -> Row {
    Row {
        curve: spec.curve.clone(),
        model: spec.model.name().into(),
        axis_value: x,
        eps_real: Some(eps.re),
        eps_imag: Some(eps.im),
        gamma_over_gamma0: None,
        delta_omega_over_gamma0: None,
        gamma_perp: None,
        gamma_par: None,
        method: spec.method.name().into(),
        error_estimate: None,
        status: STATUS_OK.into(),
    }
}

fn planar_row(spec: &ScanSpec, x: f64, omega: f64, eps: Complex64) -> Result<Row, CliError> {
    let qz = if spec.axis == Axis::Distance { x } else { spec.qz.unwrap_or_default() };
    let method = spec.method.planar().expect("validated planar method");
    let dipole = DipoleConfig::from_direction(omega, spec.dipole)?;
    let cfg = PlanarConfig::new(qz, eps, dipole)?;
    let rate = planar_decay_rate(&cfg, method, spec.tol)?;

    let mut row = base_row(spec, x, eps);
    row.gamma_over_gamma0 = Some(rate.gamma);
    row.error_estimate = Some(rate.error_estimate);
    if spec.include_integral_term {
        let integral = FrequencyIntegral {
            model: spec.permittivity.clone(),
            omega_max: spec.omega_max,
        };
        let shift = planar_line_shift(&cfg, method, Some(&integral), spec.tol)?;
        row.delta_omega_over_gamma0 = Some(shift.shift);
        row.error_estimate = Some(rate.error_estimate.max(shift.abs_error));
    } else {
        row.delta_omega_over_gamma0 = rate.shift;
    }
    Ok(row)
}

fn cavity_size(spec: &ScanSpec, x: f64) -> f64 {
    if spec.axis == Axis::Radius {
        x
    } else {
        spec.size.unwrap_or_default()
    }
}

fn real_cavity_row(spec: &ScanSpec, x: f64, eps: Complex64) -> Result<Row, CliError> {
    let cfg = SphericalConfig::new(cavity_size(spec, x), eps)?;
    let rate = match spec.method {
        MethodFlag::SmallRadius => real_cavity_rate_small_radius(&cfg)?,
        _ => real_cavity_rate_exact(&cfg)?,
    };
    let mut row = base_row(spec, x, eps);
    row.gamma_over_gamma0 = Some(rate.gamma);
    row.error_estimate = Some(rate.error_estimate);
    Ok(row)
}

fn virtual_cavity_row(spec: &ScanSpec, x: f64, eps: Complex64) -> Result<Row, CliError> {
    let cfg = SphericalConfig::new(cavity_size(spec, x), eps)?;
    let rate = virtual_rate_total(&cfg)?;
    let mut row = base_row(spec, x, eps);
    row.gamma_over_gamma0 = Some(rate.total);
    row.gamma_perp = Some(rate.transverse);
    row.gamma_par = Some(rate.longitudinal);
    row.error_estimate = Some(0.0);
    let mut warnings = Vec::new();
    if rate.beyond_validity {
        warnings.push("size*|n| beyond small-radius range");
    }
    if rate.negative {
        warnings.push("negative rate");
    }
    if !warnings.is_empty() {
        row.status = format!("warning: {}", warnings.join("; "));
    }
    Ok(row)
}

fn rows_for(spec: &ScanSpec) -> Vec<Row> {
    spec.range.values().into_par_iter().map(|x| evaluate(spec, x)).collect()
}

/// Evaluates a single spec. Points that fail numerically become error rows.
pub fn run_scan(spec: &ScanSpec) -> Result<ScanTable, CliError> {
    spec.validate()?;
    Ok(ScanTable {
        metadata: spec_metadata(spec),
        rows: rows_for(spec),
    })
}

/// Evaluates several specs into one table; each spec's parameters are
/// recorded under `curve.<label>` metadata keys.
pub fn run_scans(specs: &[ScanSpec], mut metadata: BTreeMap<String, String>) -> Result<ScanTable, CliError> {
    for spec in specs {
        spec.validate()?;
    }
    let mut rows = Vec::new();
    for spec in specs {
        let summary = spec_metadata(spec)
            .into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join("; ");
        metadata.insert(format!("curve.{}", spec.curve), summary);
        rows.extend(rows_for(spec));
    }
    Ok(ScanTable { metadata, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::Range;

    #[test]
    fn vacuum_planar_scan_is_unity() {
        let mut s = ScanSpec::new(Model::Planar, Axis::Omega, Range::new(0.5, 1.5, 5).unwrap());
        s.permittivity = ComplexPermittivity::Constant(Complex64::new(1.0, 0.0));
        s.qz = Some(0.1);
        let t = run_scan(&s).unwrap();
        assert_eq!(t.rows.len(), 5);
        for r in &t.rows {
            assert_eq!(r.gamma_over_gamma0, Some(1.0));
            assert_eq!(r.status, STATUS_OK);
        }
    }

    #[test]
    fn rows_stay_in_axis_order() {
        let mut s = ScanSpec::new(Model::RealCavity, Axis::Radius, Range::new(0.01, 1.0, 40).unwrap());
        s.omega = 0.9;
        let t = run_scan(&s).unwrap();
        let xs: Vec<f64> = t.rows.iter().map(|r| r.axis_value).collect();
        assert_eq!(xs, s.range.values());
    }

    #[test]
    fn failures_become_marked_rows() {
        // the exact real-cavity coefficient refuses sizes beyond its range
        let mut s = ScanSpec::new(Model::RealCavity, Axis::Radius, Range::new(10.0, 100.0, 3).unwrap());
        s.omega = 1.0;
        let t = run_scan(&s).unwrap();
        assert!(t.has_errors());
        let last = t.rows.last().unwrap();
        assert!(last.is_error() && last.gamma_over_gamma0.is_none());
        assert!(!t.rows[0].is_error());
    }

    #[test]
    fn virtual_cavity_reports_split_and_warnings() {
        let mut s = ScanSpec::new(Model::VirtualCavity, Axis::Omega, Range::new(0.5, 1.5, 11).unwrap());
        s.size = Some(1.2566);
        let t = run_scan(&s).unwrap();
        for r in &t.rows {
            let (total, perp, par) = (
                r.gamma_over_gamma0.unwrap(),
                r.gamma_perp.unwrap(),
                r.gamma_par.unwrap(),
            );
            assert_eq!(total, perp + par);
        }
        assert!(t.rows.iter().any(|r| r.status.starts_with("warning")));
    }

    #[test]
    fn metadata_records_kappa() {
        let mut s = ScanSpec::new(Model::Planar, Axis::Distance, Range::new(0.02, 0.5, 3).unwrap());
        s.method = MethodFlag::Leading;
        let t = run_scan(&s).unwrap();
        let kappa: f64 = t.metadata["kappa_at_omega_a"].parse().unwrap();
        assert!((kappa - 1.29).abs() < 0.005);
    }
}
