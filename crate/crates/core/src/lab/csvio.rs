//! CSV artifacts: UTF-8, LF line endings, mandatory header, floats with 17
//! significant digits.

use std::fmt::Write as _;

use super::LabError;
use crate::complex::format_real;
use crate::density::{DensityCurve, ScanRecord};
use crate::joint::JointScanRecord;

const SCAN_HEADER: [&str; 3] = ["tau", "d1", "d2"];

pub fn scan_csv(records: &[ScanRecord]) -> String {
    let mut out = String::from("tau,d1,d2\n");
    for r in records {
        let _ = writeln!(out, "{},{},{}", format_real(r.tau), format_real(r.d1), format_real(r.d2));
    }
    out
}

pub fn density_csv(curve: &DensityCurve) -> String {
    let mut out = String::from("epsilon,density,uncertainty\n");
    for p in &curve.points {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_real(p.epsilon),
            format_real(p.density),
            format_real(p.uncertainty)
        );
    }
    out
}

/// Two columns `epsilon,density` for external plotting tools.
pub fn plot_csv(curve: &DensityCurve) -> String {
    let mut out = String::from("epsilon,density\n");
    for p in &curve.points {
        let _ = writeln!(out, "{},{}", format_real(p.epsilon), format_real(p.density));
    }
    out
}

pub fn joint_scan_csv(labels: &[(usize, usize)], records: &[JointScanRecord]) -> String {
    let mut out = String::from("tau,d_phi");
    for (j, l) in labels {
        let _ = write!(out, ",d_{j}_{l}");
    }
    out.push('\n');
    for r in records {
        out.push_str(&format_real(r.tau));
        out.push(',');
        out.push_str(&format_real(r.d_phi));
        for &d in &r.d {
            out.push(',');
            out.push_str(&format_real(d));
        }
        out.push('\n');
    }
    out
}

fn rows(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), LabError> {
    let schema = |m: String| LabError::input(format!("CSV schema mismatch: {m}"));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| schema(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.len() == 1 && header[0].is_empty() {
        return Err(schema("missing header row".into()));
    }
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| schema(e.to_string()))?;
        let values = rec
            .iter()
            .map(|field| {
                field
                    .trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| schema(format!("row {}: bad number {field:?}", i + 2)))
            })
            .collect::<Result<Vec<f64>, LabError>>()?;
        if values[1..].iter().any(|&d| d < 0.0) {
            return Err(schema(format!("row {}: negative distance", i + 2)));
        }
        if let Some(prev) = out.last().map(|v: &Vec<f64>| v[0]) {
            if !(values[0] > prev) {
                return Err(schema(format!("row {}: tau not strictly increasing", i + 2)));
            }
        }
        out.push(values);
    }
    if out.is_empty() {
        return Err(LabError::input("no records"));
    }
    Ok((header, out))
}

pub fn read_scan_csv(text: &str) -> Result<Vec<ScanRecord>, LabError> {
    let (header, rows) = rows(text)?;
    if header != SCAN_HEADER {
        return Err(LabError::input(format!(
            "CSV schema mismatch: expected header tau,d1,d2, got {}",
            header.join(",")
        )));
    }
    Ok(rows
        .into_iter()
        .map(|v| ScanRecord {
            tau: v[0],
            d1: v[1],
            d2: v[2],
        })
        .collect())
}

/// Header labels `(j, l)` and the records of a joint scan.
pub type JointScan = (Vec<(usize, usize)>, Vec<JointScanRecord>);

/// Parses a joint scan; returns the `(j, l)` labels from the header.
pub fn read_joint_scan_csv(text: &str) -> Result<JointScan, LabError> {
    let (header, rows) = rows(text)?;
    let bad = || LabError::input(format!("CSV schema mismatch: bad joint header {}", header.join(",")));
    if header.len() < 3 || header[0] != "tau" || header[1] != "d_phi" {
        return Err(bad());
    }
    let labels = header[2..]
        .iter()
        .map(|h| {
            let rest = h.strip_prefix("d_")?;
            let (j, l) = rest.split_once('_')?;
            Some((j.parse().ok()?, l.parse().ok()?))
        })
        .collect::<Option<Vec<(usize, usize)>>>()
        .ok_or_else(bad)?;
    let records = rows
        .into_iter()
        .map(|v| JointScanRecord {
            tau: v[0],
            d_phi: v[1],
            d: v[2..].to_vec(),
        })
        .collect();
    Ok((labels, records))
}
