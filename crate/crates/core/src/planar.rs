//! Emitter in vacuum at distance `z` above an absorbing dielectric half-space.
//!
//! The scattered Green tensor at the emitter is diagonal, with
//! `R_xx = R_yy` and `R_zz`. It is handled here through the dimensionless
//! components `r̂ = R·c/ω`, which turn the rate and shift into
//!
//! ```text
//! Γ/Γ₀  = 1 + 6π [(w_x + w_y) Im r̂_xx + w_z Im r̂_zz]
//! δω/Γ₀ =     6π [(w_x + w_y) Re r̂_xx + w_z Re r̂_zz]   (first term)
//! ```
//!
//! with `w` the squared direction cosines of the dipole.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dipole::DipoleConfig;
use crate::error::{ensure_finite, ensure_finite_complex, Error, Result};
use crate::medium::{refractive_index, ComplexPermittivity};
use crate::quadrature::{integrate_segment, integrate_segment_with, integrate_tail, Endpoint};
use crate::RateResult;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Evanescent components beyond `e^{-60}` attenuation are dropped.
const EVANESCENT_CUTOFF: f64 = 60.0;

/// How the reflection tensor is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Numerical Sommerfeld integrals.
    Quadrature,
    /// Small-distance expansion through `O(z⁰)`.
    Asymptotic,
    /// Only the `z⁻³` near-field term.
    Leading,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Self::Quadrature => "quadrature",
            Self::Asymptotic => "asymptotic",
            Self::Leading => "leading",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadrature" => Ok(Self::Quadrature),
            "asymptotic" => Ok(Self::Asymptotic),
            "leading" => Ok(Self::Leading),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarConfig {
    /// Emitter–surface distance as `q·z = ω z / c`.
    pub qz: f64,
    /// Permittivity of the half-space at the transition frequency.
    pub eps: Complex64,
    pub dipole: DipoleConfig,
}

impl PlanarConfig {
    pub fn new(qz: f64, eps: Complex64, dipole: DipoleConfig) -> Result<Self> {
        ensure_finite("qz", qz)?;
        ensure_finite_complex("eps", eps)?;
        if qz <= 0.0 {
            return Err(Error::InvalidArgument(format!("qz must be positive, got {qz}")));
        }
        if eps.im < 0.0 {
            return Err(Error::ActiveMedium {
                omega: dipole.omega_a(),
                im: eps.im,
            });
        }
        Ok(Self { qz, eps, dipole })
    }
}

/// Dimensionless diagonal reflection tensor `r̂_kk = R_kk c/ω` at the emitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionTensor {
    /// `r̂_xx`, equal to `r̂_yy`.
    pub rxx: Complex64,
    pub rzz: Complex64,
    pub method: Method,
    /// Absolute error estimate for each component (zero for closed forms).
    pub abs_error: f64,
}

impl ReflectionTensor {
    pub fn ryy(&self) -> Complex64 {
        self.rxx
    }

    /// `(w_x + w_y) r̂_xx + w_z r̂_zz`.
    pub fn contract(&self, dipole: &DipoleConfig) -> Complex64 {
        self.rxx * dipole.in_plane() + self.rzz * dipole.normal()
    }
}

/// Square root on the branch with non-negative imaginary part.
fn upper_sqrt(z: Complex64) -> Complex64 {
    let s = Complex64::new(z.re, z.im + 0.0).sqrt();
    if s.im < 0.0 {
        -s
    } else {
        s
    }
}

/// Axial wavenumbers `(β₁, β₂)/q` in vacuum and medium for transverse
/// wavenumber `u = k/q`.
fn axial(u: f64, eps: Complex64) -> (Complex64, Complex64) {
    let u2 = Complex64::new(u * u, 0.0);
    (upper_sqrt(1.0 - u2), upper_sqrt(eps - u2))
}

/// Fresnel coefficient for s-polarised waves, `(β₁ − β₂)/(β₁ + β₂)`.
pub fn fresnel_rs(u: f64, eps: Complex64) -> Complex64 {
    if eps == Complex64::new(1.0, 0.0) {
        return Complex64::default();
    }
    let (b1, b2) = axial(u, eps);
    // (β₁ − β₂)(β₁ + β₂) = 1 − ε, no cancellation at large u
    (1.0 - eps) / ((b1 + b2) * (b1 + b2))
}

/// Fresnel coefficient for p-polarised waves, `(εβ₁ − β₂)/(εβ₁ + β₂)`.
pub fn fresnel_rp(u: f64, eps: Complex64) -> Complex64 {
    if eps == Complex64::new(1.0, 0.0) {
        return Complex64::default();
    }
    let (b1, b2) = axial(u, eps);
    let denom = eps * b1 + b2;
    // (εβ₁)² − β₂² = (ε − 1)(ε − u²(ε + 1))
    (eps - 1.0) * (eps - (eps + 1.0) * (u * u)) / (denom * denom)
}

/// Integrands of `r̂_zz` and `r̂_xx` over `u = k/q`, prefactors included.
struct Kernels {
    qz: f64,
    eps: Complex64,
    u_max: f64,
}

impl Kernels {
    fn new(qz: f64, eps: Complex64) -> Self {
        Self {
            qz,
            eps,
            u_max: 1.0 + EVANESCENT_CUTOFF / (2.0 * qz),
        }
    }

    fn common(&self, u: f64) -> Option<(Complex64, Complex64)> {
        if u > self.u_max {
            return None;
        }
        let b = upper_sqrt(Complex64::new(1.0 - u * u, 0.0));
        if b == Complex64::default() {
            // a substituted node rounded onto the integrable 1/b point
            return None;
        }
        let phase = (2.0 * I * b * self.qz).exp();
        Some((b, phase))
    }

    fn zz(&self, u: f64) -> Complex64 {
        match self.common(u) {
            Some((b, phase)) => I / (4.0 * PI) * u.powi(3) / b * phase * fresnel_rp(u, self.eps),
            None => Complex64::default(),
        }
    }

    fn xx(&self, u: f64) -> Complex64 {
        match self.common(u) {
            Some((b, phase)) => {
                let p = -u * b * fresnel_rp(u, self.eps);
                let s = u / b * fresnel_rs(u, self.eps);
                I / (8.0 * PI) * (p + s) * phase
            }
            None => Complex64::default(),
        }
    }

    /// Interior points where the integrand varies sharply: the medium's
    /// branch point `Re n` and the surface-mode pole `Re √(ε/(ε+1))`.
    fn breakpoints(&self) -> Vec<f64> {
        let mut pts = vec![upper_sqrt(self.eps).re];
        let ratio = self.eps / (self.eps + 1.0);
        if ratio.re.is_finite() && ratio.im.is_finite() {
            pts.push(upper_sqrt(ratio).re);
        }
        pts.retain(|&p| p > 1e-3 && (p - 1.0).abs() > 1e-9 && p < self.u_max);
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
        pts
    }

    fn integrate<F: Fn(f64) -> Complex64>(&self, f: F, tol: f64) -> Result<(Complex64, f64)> {
        let breaks = self.breakpoints();
        let (inner, outer): (Vec<f64>, Vec<f64>) = breaks.into_iter().partition(|&p| p < 1.0);

        let mut edges = vec![0.0];
        edges.extend(inner);
        edges.push(1.0);
        edges.extend(outer.iter().copied());
        let tail_start = outer.last().map_or(2.0, |&p| p + 1.0);
        edges.push(tail_start);

        // every interior edge is a square-root point: substitute on both sides
        let last = edges.len() - 1;
        let mut segments = Vec::new();
        for (k, pair) in edges.windows(2).enumerate() {
            let (a, b) = (pair[0], pair[1]);
            let lower_singular = k > 0;
            let upper_singular = k + 1 < last;
            match (lower_singular, upper_singular) {
                (true, true) => {
                    let mid = 0.5 * (a + b);
                    segments.push((a, mid, Endpoint::SqrtLower));
                    segments.push((mid, b, Endpoint::SqrtUpper));
                }
                (true, false) => segments.push((a, b, Endpoint::SqrtLower)),
                (false, true) => segments.push((a, b, Endpoint::SqrtUpper)),
                (false, false) => segments.push((a, b, Endpoint::Regular)),
            }
        }

        let piece_tol = tol / (segments.len() + 1) as f64;
        let mut value = Complex64::default();
        let mut error = 0.0;
        for (a, b, endpoint) in segments {
            let r = integrate_segment_with(&f, a, b, endpoint, piece_tol)?;
            value += r.value;
            error += r.abs_error;
        }
        let r = integrate_tail(&f, tail_start, 1.0 / (2.0 * self.qz), piece_tol)?;
        Ok((value + r.value, error + r.abs_error))
    }
}

/// Reflection tensor from the Sommerfeld integrals, split at the branch
/// point `u = 1` into propagating and evanescent parts.
pub fn reflection_tensor_quadrature(cfg: &PlanarConfig, tol: f64) -> Result<ReflectionTensor> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let kernels = Kernels::new(cfg.qz, cfg.eps);
    let (rzz, ezz) = kernels.integrate(|u| kernels.zz(u), tol)?;
    let (rxx, exx) = kernels.integrate(|u| kernels.xx(u), tol)?;
    Ok(ReflectionTensor {
        rxx,
        rzz,
        method: Method::Quadrature,
        abs_error: ezz.max(exx),
    })
}

fn check_pole(value: Complex64, what: &'static str, cfg: &PlanarConfig) -> Result<()> {
    if value.norm() <= f64::EPSILON {
        Err(Error::Pole {
            what,
            size: cfg.qz,
            n: upper_sqrt(cfg.eps),
        })
    } else {
        Ok(())
    }
}

/// Small-distance expansion of the reflection tensor through `O(z⁰)`.
///
/// Only the `(qz)⁻³` term coincides with the small-distance limit of the
/// Sommerfeld integrals; the `(qz)⁻¹` and constant terms as written here
/// differ from it (for `ε = 2.25` the quadrature gives a `(qz)⁻¹`
/// coefficient about ten times larger), so away from the `(qz)⁻³` regime
/// prefer [`reflection_tensor_quadrature`].
pub fn reflection_tensor_asymptotic(cfg: &PlanarConfig) -> Result<ReflectionTensor> {
    let eps = cfg.eps;
    let n = refractive_index(eps)?.n;
    check_pole(eps + 1.0, "eps = -1 (surface-mode pole)", cfg)?;
    check_pole(n, "eps = 0", cfg)?;
    let x = cfg.qz;

    let static_factor = (eps - 1.0) / (eps + 1.0);
    let n_ratio = n * (n + 1.0);
    let rzz = static_factor / (16.0 * PI * x.powi(3))
        + (n - 1.0) * (n - 1.0) / n_ratio / (8.0 * PI * x)
        + I * (n - 1.0) * (2.0 * n - 1.0) / n_ratio / (12.0 * PI);
    let rxx = rzz * 0.5 - static_factor / (16.0 * PI * x) - I * (n - 1.0) / (n + 1.0) / (3.0 * PI);
    Ok(ReflectionTensor {
        rxx,
        rzz,
        method: Method::Asymptotic,
        abs_error: 0.0,
    })
}

/// Only the `(qz)⁻³` terms of the expansion (`r̂_xx = r̂_zz / 2`).
pub fn reflection_tensor_leading(cfg: &PlanarConfig) -> Result<ReflectionTensor> {
    check_pole(cfg.eps + 1.0, "eps = -1 (surface-mode pole)", cfg)?;
    let rzz = (cfg.eps - 1.0) / (cfg.eps + 1.0) / (16.0 * PI * cfg.qz.powi(3));
    Ok(ReflectionTensor {
        rxx: rzz * 0.5,
        rzz,
        method: Method::Leading,
        abs_error: 0.0,
    })
}

pub fn reflection_tensor(cfg: &PlanarConfig, method: Method, tol: f64) -> Result<ReflectionTensor> {
    match method {
        Method::Quadrature => reflection_tensor_quadrature(cfg, tol),
        Method::Asymptotic => reflection_tensor_asymptotic(cfg),
        Method::Leading => reflection_tensor_leading(cfg),
    }
}

/// `Γ/Γ₀` above the half-space. The emitter sits in vacuum, so the rate is
/// purely transverse.
pub fn planar_decay_rate(cfg: &PlanarConfig, method: Method, tol: f64) -> Result<RateResult> {
    let r = reflection_tensor(cfg, method, tol)?;
    let gamma = 1.0 + 6.0 * PI * r.contract(&cfg.dipole).im;
    Ok(RateResult {
        gamma,
        shift: Some(6.0 * PI * r.contract(&cfg.dipole).re),
        transverse: gamma,
        longitudinal: 0.0,
        method: method.name(),
        error_estimate: 6.0 * PI * r.abs_error,
    })
}

/// Closed form of the near-field rate,
/// `1 + (1 + w_z)·3/(8(qz)³)·ε_I/|ε + 1|²`, for dipoles without a preferred
/// in-plane axis. Kept separate from the tensor contraction as a check.
pub fn leading_rate_closed_form(qz: f64, eps: Complex64, normal_weight: f64) -> f64 {
    1.0 + (1.0 + normal_weight) * 3.0 / (8.0 * qz.powi(3)) * eps.im / (eps + 1.0).norm_sqr()
}

/// Vertical line-width resolution: `d(Γ/Γ₀)/d(qz)` of the near-field rate,
/// which falls off as `(qz)⁻⁴`.
pub fn snom_resolution(cfg: &PlanarConfig) -> Result<f64> {
    let r = reflection_tensor_leading(cfg)?;
    let excess = 6.0 * PI * r.contract(&cfg.dipole).im;
    Ok(-3.0 * excess / cfg.qz)
}

/// Frequency-integral part of the line shift.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyIntegral {
    /// Dispersive model of the half-space, valid on `(0, omega_max]`.
    pub model: ComplexPermittivity,
    /// Upper cutoff; beyond it `ε → 1` and the reflection vanishes.
    pub omega_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftResult {
    /// `δω/Γ₀`.
    pub shift: f64,
    /// Contribution of `Re r̂` at the transition frequency.
    pub first_term: f64,
    /// Frequency-integral contribution (already subtracted in `shift`).
    pub integral_term: f64,
    pub abs_error: f64,
}

/// Medium-induced line shift `δω/Γ₀`.
///
/// The first term is `6π·Re` of the contracted tensor at `ω_A`. With
/// `integral` set, the term
///
/// ```text
/// (6/ω_A³) ∫₀^ω_max dω′ ω′³ Im[(w_x+w_y) r̂_xx + w_z r̂_zz](ω′) / (ω′ + ω_A)
/// ```
///
/// is subtracted. Bookkeeping of the powers of `ω′`: the coupling prefactor
/// under the integral carries `ω′²`, and `R = (ω′/c)·r̂` carries one more;
/// dividing by `Γ₀ ∝ ω_A³` leaves `(ω′/ω_A)³`. At `ω′` the distance is
/// `qz·ω′/ω_A` and the permittivity `ε(ω′)`.
pub fn planar_line_shift(
    cfg: &PlanarConfig,
    method: Method,
    integral: Option<&FrequencyIntegral>,
    tol: f64,
) -> Result<ShiftResult> {
    let r = reflection_tensor(cfg, method, tol)?;
    let first_term = 6.0 * PI * r.contract(&cfg.dipole).re;
    let mut abs_error = 6.0 * PI * r.abs_error;

    let integral_term = match integral {
        None => 0.0,
        Some(spec) => {
            let (value, err) = frequency_integral(cfg, method, spec, tol)?;
            abs_error += err;
            value
        }
    };
    Ok(ShiftResult {
        shift: first_term - integral_term,
        first_term,
        integral_term,
        abs_error,
    })
}

/// Accuracy floor of the inner reflection-tensor quadrature, relative to the
/// tensor's near-field scale.
const INNER_FLOOR: f64 = 1e-12;

fn frequency_integral(
    cfg: &PlanarConfig,
    method: Method,
    spec: &FrequencyIntegral,
    tol: f64,
) -> Result<(f64, f64)> {
    if spec.model.is_point_valued() {
        return Err(Error::InvalidArgument(
            "frequency-integral term needs a dispersive permittivity model, not a single value".into(),
        ));
    }
    ensure_finite("omega_max", spec.omega_max)?;
    let omega_a = cfg.dipole.omega_a();
    if spec.omega_max <= 0.0 {
        return Err(Error::InvalidArgument("omega_max must be positive".into()));
    }

    let mut grid: Vec<f64> = [0.0, 0.5, 0.9, 1.0, 1.1, 1.25, 1.5, 2.0, 5.0, 10.0, 20.0, omega_a]
        .into_iter()
        .filter(|&w| w < spec.omega_max)
        .collect();
    grid.push(spec.omega_max);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let piece_tol = tol / (6.0 * grid.len() as f64);

    let weight = |w: f64| (w / omega_a).powi(3) / (w + omega_a);
    // the Sommerfeld quadrature cannot go below this, relative to r̂'s scale
    let inner_floor = |w: f64, eps: Complex64| {
        let qz = cfg.qz * w / omega_a;
        INNER_FLOOR * (1.0 + ((eps - 1.0) / (eps + 1.0)).norm() / (16.0 * PI * qz.powi(3)))
    };

    // inner failures cannot cross the integrand boundary; park the first one
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let integrand = |w: f64| -> Complex64 {
        let eval = || -> Result<f64> {
            let eps = spec.model.evaluate(w)?;
            let local = PlanarConfig::new(cfg.qz * w / omega_a, eps, cfg.dipole)?;
            // inner noise is amplified by the weight: tighten where it is large
            let inner_tol = (0.1 * piece_tol / (weight(w) * spec.omega_max).max(1.0)).max(inner_floor(w, eps));
            let r = reflection_tensor(&local, method, inner_tol)?;
            Ok(weight(w) * r.contract(&cfg.dipole).im)
        };
        match eval() {
            Ok(v) => Complex64::new(v, 0.0),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(f64::NAN, 0.0)
            }
        }
    };

    let mut value = 0.0;
    let mut error = 0.0;
    for pair in grid.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        // where the weight is large the inner floor, not `tol`, sets what is reachable
        let mut noise: f64 = 0.0;
        for w in [a, 0.5 * (a + b), b] {
            if w > 0.0 {
                noise = noise.max(weight(w) * inner_floor(w, spec.model.evaluate(w)?));
            }
        }
        let result = integrate_segment(integrand, a, b, piece_tol.max(4.0 * noise * (b - a)));
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
        let r = result?;
        value += r.value.re;
        error += r.abs_error;
    }
    Ok((6.0 * value, 6.0 * error))
}
