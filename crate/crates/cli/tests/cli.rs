use std::io::Write;
use std::process::{Command, Output};

use decaykit_cli::output::{read_csv, read_json};
use decaykit_core::real_cavity::glauber_lewenstein;

fn decaykit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_decaykit"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn documented_planar_scan_runs() {
    let out = decaykit(&[
        "scan", "--model", "planar", "--axis", "omega", "--range", "0.5:1.5:11", "--qz", "0.6283",
        "--gamma", "0.05", "--dipole", "0,0,1", "--method", "quadrature", "--tol", "1e-8", "--format", "csv",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = read_csv(out.stdout.as_slice()).unwrap();
    assert_eq!(table.rows.len(), 11);
    assert_eq!(table.metadata["qz"], "0.6283");
    assert!(table.rows.iter().all(|r| r.status == "ok" && r.delta_omega_over_gamma0.is_some()));
}

#[test]
fn vacuum_constant_model_scan_is_unity() {
    let out = decaykit(&[
        "scan", "--model", "planar", "--axis", "distance", "--range", "0.01:2:9", "--eps", "1,0",
    ]);
    assert!(out.status.success());
    let table = read_csv(out.stdout.as_slice()).unwrap();
    assert!(table.rows.iter().all(|r| r.gamma_over_gamma0 == Some(1.0)));
}

#[test]
fn real_cavity_index_scan_follows_glauber_lewenstein() {
    let out = decaykit(&[
        "scan", "--model", "real-cavity", "--axis", "index", "--range", "1:2:11", "--size", "1e-3",
    ]);
    assert!(out.status.success());
    let table = read_csv(out.stdout.as_slice()).unwrap();
    for r in &table.rows {
        let gl = glauber_lewenstein(r.axis_value).unwrap();
        assert!((r.gamma_over_gamma0.unwrap() / gl - 1.0).abs() < 1e-3);
    }
}

#[test]
fn json_output_round_trips_and_is_deterministic() {
    let args = ["preset", "fig4", "--format", "json", "--points", "9"];
    let a = decaykit(&args);
    let b = decaykit(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let table = read_json(a.stdout.as_slice()).unwrap();
    assert_eq!(table.rows.len(), 4 * 9);
    let mut again = Vec::new();
    decaykit_cli::output::write_json(&table, &mut again).unwrap();
    assert_eq!(again, a.stdout);
}

#[test]
fn tabulated_permittivity_file() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "# omega re im").unwrap();
    for k in 0..=20 {
        let w = 0.5 + 0.05 * k as f64;
        writeln!(file, "{w} 2.25 {}", 0.1 * w).unwrap();
    }
    let path = file.path().to_str().unwrap();
    let out = decaykit(&[
        "scan", "--model", "virtual-cavity", "--axis", "omega", "--range", "0.5:1.5:5", "--size", "0.1",
        "--eps-table", path,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = read_csv(out.stdout.as_slice()).unwrap();
    assert!(table.metadata["permittivity"].starts_with("table(21 points"));
    assert_eq!(table.rows[0].eps_imag, Some(0.05));
}

#[test]
fn usage_errors_exit_with_two() {
    let cases: [&[&str]; 4] = [
        &["scan", "--model", "planar", "--axis", "omega", "--range", "1:0:5", "--qz", "0.1"],
        &["scan", "--model", "planar", "--axis", "omega", "--range", "0.5:1.5:5"],
        &["scan", "--model", "real-cavity", "--axis", "distance", "--range", "0.1:1:5", "--size", "0.1"],
        &["preset", "fig9"],
    ];
    for args in cases {
        let out = decaykit(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn strict_mode_turns_failed_points_into_exit_three() {
    // sizes beyond the exact coefficient's range fail point-wise
    let args = ["scan", "--model", "real-cavity", "--axis", "radius", "--range", "10:100:4"];
    let lenient = decaykit(&args);
    assert_eq!(lenient.status.code(), Some(0));
    let table = read_csv(lenient.stdout.as_slice()).unwrap();
    assert!(table.rows.iter().any(|r| r.status.starts_with("error")));

    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(decaykit(&strict).status.code(), Some(3));
}
