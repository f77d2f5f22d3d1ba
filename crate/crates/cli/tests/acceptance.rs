//! Exit criteria. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use decaykit_cli::{run_preset, Preset, PresetOptions, Row, ScanTable};
use decaykit_core::planar::{
    leading_rate_closed_form, planar_decay_rate, reflection_tensor, snom_resolution,
};
use decaykit_core::real_cavity::{
    glauber_lewenstein, real_cavity_rate_exact, real_cavity_rate_small_radius, small_radius_terms,
};
use decaykit_core::virtual_cavity::{lorentz_lorenz_rate, virtual_rate_longitudinal, virtual_rate_total};
use decaykit_core::{ComplexPermittivity, Complex64, DipoleConfig, Method, PlanarConfig, SphericalConfig};
use rand::{rngs::StdRng, Rng, SeedableRng};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    check: fn() -> Outcome,
}

fn secs(s: f64) -> Duration {
    Duration::from_secs_f64(s)
}

fn planar(qz: f64, eps: Complex64, w: [f64; 3]) -> PlanarConfig {
    PlanarConfig::new(qz, eps, DipoleConfig::new(1.0, w).unwrap()).unwrap()
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn vacuum_identity() -> Outcome {
    let one = real(1.0);
    let mut worst: f64 = 0.0;
    for qz in [0.01, 0.1, 1.0, 5.0] {
        for w in [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [1.0 / 3.0; 3]] {
            let cfg = planar(qz, one, w);
            for method in [Method::Quadrature, Method::Asymptotic, Method::Leading] {
                let g = planar_decay_rate(&cfg, method, 1e-8).map_err(|e| e.to_string())?.gamma;
                worst = worst.max((g - 1.0).abs());
            }
        }
    }
    if worst > 1e-8 {
        return Err(format!("planar |Γ/Γ₀ − 1| = {worst:e}"));
    }
    for size in [1e-3, 0.1, 1.0, 10.0] {
        let cfg = SphericalConfig::new(size, one).unwrap();
        let exact = real_cavity_rate_exact(&cfg).map_err(|e| e.to_string())?.gamma;
        let virt = virtual_rate_total(&cfg).map_err(|e| e.to_string())?.total;
        if exact != 1.0 || virt != 1.0 {
            return Err(format!("size {size}: real {exact}, virtual {virt}"));
        }
    }
    Ok(format!("planar max |Γ/Γ₀ − 1| = {worst:.1e}, cavities exactly 1"))
}

fn kappa_at_resonance() -> Outcome {
    let kappa = ComplexPermittivity::lorentz(0.05).index(1.0).map_err(|e| e.to_string())?.kappa();
    if (kappa - 1.29).abs() <= 0.005 {
        Ok(format!("κ = {kappa:.5}"))
    } else {
        Err(format!("κ = {kappa:.5}"))
    }
}

fn glauber_lewenstein_recovery() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [1.2f64, 1.5, 2.0] {
        let cfg = SphericalConfig::new(1e-3, real(n * n)).unwrap();
        let g = real_cavity_rate_exact(&cfg).map_err(|e| e.to_string())?.gamma;
        let gl = glauber_lewenstein(n).unwrap();
        worst = worst.max(((g - gl) / gl).abs());
    }
    if worst <= 1e-3 {
        Ok(format!("max relative deviation {worst:.2e}"))
    } else {
        Err(format!("max relative deviation {worst:.2e}"))
    }
}

fn lorentz_lorenz_recovery() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [1.2f64, 1.5, 2.0] {
        for size in [1e-3, 0.1, 1.0] {
            let cfg = SphericalConfig::new(size, real(n * n)).unwrap();
            let g = virtual_rate_total(&cfg).map_err(|e| e.to_string())?.total;
            let ll = lorentz_lorenz_rate(n).unwrap();
            worst = worst.max(((g - ll) / ll).abs());
        }
    }
    if worst <= 1e-12 {
        Ok(format!("max relative deviation {worst:.2e}"))
    } else {
        Err(format!("max relative deviation {worst:.2e}"))
    }
}

fn exact_vs_small_radius() -> Outcome {
    let mut worst: f64 = 0.0;
    for gamma in [0.05, 0.2] {
        let model = ComplexPermittivity::lorentz(gamma);
        for omega in [0.5, 0.75, 1.0, 1.25, 1.5] {
            let cfg = SphericalConfig::new(1e-3, model.evaluate(omega).unwrap()).unwrap();
            let exact = real_cavity_rate_exact(&cfg).map_err(|e| e.to_string())?.gamma;
            let small = real_cavity_rate_small_radius(&cfg).map_err(|e| e.to_string())?.gamma;
            worst = worst.max(((exact - small) / exact).abs());
        }
    }
    if worst <= 1e-2 {
        Ok(format!("max relative difference {worst:.2e}"))
    } else {
        Err(format!("max relative difference {worst:.2e}"))
    }
}

fn quadrature_vs_asymptotics() -> Outcome {
    let mut failures = Vec::new();
    let mut worst_re: f64 = 0.0;
    let mut worst_im_ratio: f64 = 0.0;
    for eps in [1.5f64, 2.25, 4.0] {
        let n = eps.sqrt();
        let im_constant = (n - 1.0) * (2.0 * n - 1.0) / (n * (n + 1.0)) / (12.0 * PI);
        for qz in [0.01, 0.02, 0.05] {
            let cfg = planar(qz, real(eps), [0.0, 0.0, 1.0]);
            let q = reflection_tensor(&cfg, Method::Quadrature, 1e-10).map_err(|e| e.to_string())?.rzz;
            let a = reflection_tensor(&cfg, Method::Asymptotic, 1e-10).map_err(|e| e.to_string())?.rzz;
            let re_rel = ((q.re - a.re) / q.re).abs();
            let im_abs = (q.im - a.im).abs();
            let im_bound = 3.0 * qz * im_constant.abs();
            worst_re = worst_re.max(re_rel / (3.0 * qz));
            worst_im_ratio = worst_im_ratio.max(im_abs / im_bound);
            if re_rel > 3.0 * qz {
                failures.push(format!("ε={eps} qz={qz}: Re rel {re_rel:.2e} > {:.2e}", 3.0 * qz));
            }
            if im_abs > im_bound {
                failures.push(format!("ε={eps} qz={qz}: |ΔIm| {im_abs:.3e} > {im_bound:.3e}"));
            }
        }
    }
    let summary = format!(
        "Re: worst diff/bound {worst_re:.2e}; Im: worst diff/bound {worst_im_ratio:.1}"
    );
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; {} of 18 checks fail, first: {}", failures.len(), failures[0]))
    }
}

fn leading_term_lock() -> Outcome {
    let eps = Complex64::new(1.0, 4.232);
    let qz: f64 = 0.02;
    let expected = 2.0 * (3.0 / 8.0) / qz.powi(3) * eps.im / (eps + 1.0).norm_sqr();
    let cfg = planar(qz, eps, [0.0, 0.0, 1.0]);
    let g = planar_decay_rate(&cfg, Method::Quadrature, 1e-8).map_err(|e| e.to_string())?.gamma;
    let rel = ((g - 1.0 - expected) / expected).abs();
    let msg = format!("Γ/Γ₀ − 1 = {:.1} vs {expected:.1} (rel {rel:.2e})", g - 1.0);
    if (expected - 18110.0).abs() / 18110.0 < 1e-3 && rel <= 0.05 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn power_laws() -> Outcome {
    let eps = Complex64::new(1.0, 4.232);
    let mut worst_rate: f64 = 0.0;
    let mut worst_snom: f64 = 0.0;
    for qz in [0.01, 0.05, 0.2] {
        let near = planar(qz, eps, [0.0, 0.0, 1.0]);
        let far = planar(2.0 * qz, eps, [0.0, 0.0, 1.0]);
        let g1 = planar_decay_rate(&near, Method::Leading, 1e-8).unwrap().gamma - 1.0;
        let g2 = planar_decay_rate(&far, Method::Leading, 1e-8).unwrap().gamma - 1.0;
        worst_rate = worst_rate.max((g1 / g2 - 8.0).abs());
        let s = snom_resolution(&near).unwrap() / snom_resolution(&far).unwrap();
        worst_snom = worst_snom.max((s - 16.0).abs());
    }
    let msg = format!("|ratio − 8| ≤ {worst_rate:.1e}, |ratio − 16| ≤ {worst_snom:.1e}");
    if worst_rate <= 1e-10 && worst_snom <= 1e-10 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn absorption_only_terms() -> Outcome {
    for eps in [1.5, 2.25, 4.0] {
        for size in [1e-3, 0.05, 0.5] {
            let cfg = SphericalConfig::new(size, real(eps)).unwrap();
            let t = small_radius_terms(&cfg).map_err(|e| e.to_string())?;
            let par = virtual_rate_longitudinal(&cfg).map_err(|e| e.to_string())?;
            if t.cubic != 0.0 || t.inverse != 0.0 || par != 0.0 {
                return Err(format!(
                    "ε={eps} size={size}: cubic {}, inverse {}, Γ∥ {par}",
                    t.cubic, t.inverse
                ));
            }
        }
    }
    Ok("all exactly 0".into())
}

fn curves(table: &ScanTable) -> Vec<(String, Vec<&Row>)> {
    let mut out: Vec<(String, Vec<&Row>)> = Vec::new();
    for r in &table.rows {
        match out.iter_mut().find(|(c, _)| *c == r.curve) {
            Some((_, rows)) => rows.push(r),
            None => out.push((r.curve.clone(), vec![r])),
        }
    }
    out
}

fn preset_reproduction() -> Outcome {
    let mut notes = Vec::new();
    for preset in [Preset::Fig1Left, Preset::Fig3] {
        let table = run_preset(preset, &PresetOptions::default()).map_err(|e| e.to_string())?;
        if let Some(bad) = table.rows.iter().find(|r| r.is_error()) {
            return Err(format!("{preset}: {} at {}", bad.status, bad.axis_value));
        }
        for (curve, rows) in curves(&table) {
            let values: Vec<f64> = rows.iter().filter_map(|r| r.gamma_over_gamma0).collect();
            if values.len() != rows.len() || values.iter().any(|v| !v.is_finite()) {
                return Err(format!("{preset} {curve}: missing or non-finite values"));
            }
            let (k, peak) = values
                .iter()
                .copied()
                .enumerate()
                .fold((0, f64::MIN), |best, (k, v)| if v > best.1 { (k, v) } else { best });
            let at = rows[k].axis_value;
            // an interior maximum rules out a monotone curve
            if k == 0 || k + 1 == values.len() || (at - 1.0).abs() > 0.1 {
                return Err(format!("{preset} {curve}: maximum {peak:.3} at ω_A/ω_T = {at}"));
            }
            notes.push(format!("{curve} peaks at {at:.2}"));
        }
    }
    Ok(notes.join(", "))
}

fn prefactor_identity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let eps = Complex64::new(rng.gen_range(-4.0..6.0), rng.gen_range(0.0..6.0));
        let qz = rng.gen_range(0.005..0.5);
        let wz: f64 = rng.gen_range(0.0..1.0);
        let w = 0.5 * (1.0 - wz);
        let cfg = planar(qz, eps, [w, w, wz]);
        let r = reflection_tensor(&cfg, Method::Leading, 1e-8).map_err(|e| e.to_string())?;
        let contracted = 1.0 + 6.0 * PI * r.contract(&cfg.dipole).im;
        let closed = leading_rate_closed_form(qz, eps, wz);
        worst = worst.max(((contracted - closed) / closed).abs());
    }
    if worst <= 1e-12 {
        Ok(format!("max relative deviation {worst:.1e} over 50 samples"))
    } else {
        Err(format!("max relative deviation {worst:.1e} over 50 samples"))
    }
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "vacuum identity", budget: secs(1.0), check: vacuum_identity },
        Criterion { id: 2, name: "extinction index at resonance", budget: secs(1.0), check: kappa_at_resonance },
        Criterion { id: 3, name: "Glauber-Lewenstein limit", budget: secs(1.0), check: glauber_lewenstein_recovery },
        Criterion { id: 4, name: "Lorentz-Lorenz limit", budget: secs(1.0), check: lorentz_lorenz_recovery },
        Criterion { id: 5, name: "real cavity exact vs expansion", budget: secs(1.0), check: exact_vs_small_radius },
        Criterion { id: 6, name: "planar quadrature vs asymptotics", budget: secs(10.0), check: quadrature_vs_asymptotics },
        Criterion { id: 7, name: "planar near-field lock", budget: secs(5.0), check: leading_term_lock },
        Criterion { id: 8, name: "near-field power laws", budget: secs(1.0), check: power_laws },
        Criterion { id: 9, name: "absorption-only terms", budget: secs(1.0), check: absorption_only_terms },
        Criterion { id: 10, name: "figure presets", budget: secs(30.0), check: preset_reproduction },
        Criterion { id: 11, name: "near-field prefactor identity", budget: secs(1.0), check: prefactor_identity },
    ];

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= c.budget => (true, d),
            Ok(d) => (false, format!("{d}; took {elapsed:.2?}, budget {:?}", c.budget)),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {:<34} {detail} [{elapsed:.2?}]",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.name
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
