//! CSV and JSON serialisation of scan tables.
//!
//! CSV: `# key = value` metadata lines, then a header and one record per
//! row. Numbers carry 17 significant digits so they parse back exactly;
//! missing values are empty cells.

use std::collections::BTreeMap;
use std::io::{BufRead, Read, Write};

use crate::scan::{Row, ScanTable};
use crate::CliError;

pub const COLUMNS: [&str; 12] = [
    "curve",
    "model",
    "axis_value",
    "eps_real",
    "eps_imag",
    "gamma_over_gamma0",
    "delta_omega_over_gamma0",
    "gamma_perp",
    "gamma_par",
    "method",
    "error_estimate",
    "status",
];

fn number(x: f64) -> String {
    format!("{x:.16e}")
}

fn optional(x: Option<f64>) -> String {
    x.map(number).unwrap_or_default()
}

pub fn write_csv<W: Write>(table: &ScanTable, mut out: W) -> Result<(), CliError> {
    for (key, value) in &table.metadata {
        writeln!(out, "# {key} = {value}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in &table.rows {
        w.write_record([
            r.curve.clone(),
            r.model.clone(),
            number(r.axis_value),
            optional(r.eps_real),
            optional(r.eps_imag),
            optional(r.gamma_over_gamma0),
            optional(r.delta_omega_over_gamma0),
            optional(r.gamma_perp),
            optional(r.gamma_par),
            r.method.clone(),
            optional(r.error_estimate),
            r.status.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(table: &ScanTable, mut out: W) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut out, table)?;
    writeln!(out)?;
    Ok(())
}

pub fn read_json<R: Read>(input: R) -> Result<ScanTable, CliError> {
    Ok(serde_json::from_reader(input)?)
}

pub fn read_csv<R: BufRead>(input: R) -> Result<ScanTable, CliError> {
    let mut metadata = BTreeMap::new();
    let mut body = String::new();
    for line in input.lines() {
        let line = line?;
        match line.strip_prefix("# ") {
            Some(meta) => {
                let (k, v) = meta
                    .split_once(" = ")
                    .ok_or_else(|| CliError::Usage(format!("malformed metadata line '{line}'")))?;
                metadata.insert(k.to_string(), v.to_string());
            }
            None => {
                body.push_str(&line);
                body.push('\n');
            }
        }
    }

    let parse_opt = |s: &str| -> Result<Option<f64>, CliError> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|_| CliError::Usage(format!("bad number '{s}'")))
        }
    };
    let mut rows = Vec::new();
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    for record in reader.records() {
        let rec = record?;
        if rec.len() != COLUMNS.len() {
            return Err(CliError::Usage(format!("expected {} columns, got {}", COLUMNS.len(), rec.len())));
        }
        rows.push(Row {
            curve: rec[0].to_string(),
            model: rec[1].to_string(),
            axis_value: parse_opt(&rec[2])?
                .ok_or_else(|| CliError::Usage("missing axis value".into()))?,
            eps_real: parse_opt(&rec[3])?,
            eps_imag: parse_opt(&rec[4])?,
            gamma_over_gamma0: parse_opt(&rec[5])?,
            delta_omega_over_gamma0: parse_opt(&rec[6])?,
            gamma_perp: parse_opt(&rec[7])?,
            gamma_par: parse_opt(&rec[8])?,
            method: rec[9].to_string(),
            error_estimate: parse_opt(&rec[10])?,
            status: rec[11].to_string(),
        });
    }
    Ok(ScanTable { metadata, rows })
}
