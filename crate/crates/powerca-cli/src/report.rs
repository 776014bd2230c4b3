//! Report emission: one JSON document or one CSV file per block.
//!
//! JSON is the canonical machine format. Every floating-point number is
//! serialized with 17 significant digits so values round-trip exactly;
//! given identical inputs and configuration the emitted bytes are
//! identical across runs.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use powerca::{DecompMethod, Decomposition};
use serde_json::{json, Map, Number, Value};

use crate::error::{io_err, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

/// 17 significant digits; parses back to the identical f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A JSON number carrying the 17-digit rendering verbatim.
pub fn json_float(x: f64) -> Value {
    Value::Number(Number::from_str(&fmt_float(x)).expect("finite float"))
}

/// Share of the total dispersion per axis, in percent. SVD axes are
/// weighted by squared dispersion (inertia), taxicab axes by the
/// dispersion itself.
pub fn axis_percents(d: &Decomposition) -> Vec<f64> {
    let weights: Vec<f64> = match d.method {
        DecompMethod::Svd => d.axes.iter().map(|a| a.delta * a.delta).collect(),
        DecompMethod::Taxicab => d.axes.iter().map(|a| a.delta).collect(),
    };
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        return vec![0.0; weights.len()];
    }
    weights.iter().map(|w| 100.0 * w / total).collect()
}

fn dispersion_rows(d: &Decomposition) -> Vec<(usize, f64, f64, f64)> {
    let percents = axis_percents(d);
    d.axes
        .iter()
        .enumerate()
        .map(|(i, a)| (i + 1, a.delta, a.delta * a.delta, percents[i]))
        .collect()
}

fn coords_json(labels: &[String], coords: impl Fn(usize, usize) -> f64, k: usize) -> Value {
    let rows: Vec<Value> = labels
        .iter()
        .enumerate()
        .map(|(i, label)| {
            json!({
                "label": label,
                "coords": (0..k).map(|a| json_float(coords(i, a))).collect::<Vec<_>>(),
            })
        })
        .collect();
    Value::Array(rows)
}

/// Builds the full JSON report document for a decomposition.
pub fn decomposition_json(
    analysis: &str,
    d: &Decomposition,
    row_labels: &[String],
    col_labels: &[String],
) -> Value {
    let k = d.rank();
    let dispersions: Vec<Value> = dispersion_rows(d)
        .into_iter()
        .map(|(axis, delta, delta2, percent)| {
            json!({
                "axis": axis,
                "delta": json_float(delta),
                "delta_squared": json_float(delta2),
                "percent": json_float(percent),
            })
        })
        .collect();
    let mut doc = Map::new();
    doc.insert("analysis".into(), json!(analysis));
    doc.insert("method".into(), json!(d.method.to_string()));
    doc.insert("index".into(), json!(d.source.to_string()));
    doc.insert("rows".into(), json!(d.nrows));
    doc.insert("cols".into(), json!(d.ncols));
    doc.insert("axes".into(), json!(k));
    doc.insert("dispersions".into(), Value::Array(dispersions));
    doc.insert("residual_norm".into(), json_float(d.residual_norm));
    doc.insert(
        "row_coords".into(),
        coords_json(row_labels, |i, a| d.axes[a].f[i], k),
    );
    doc.insert(
        "col_coords".into(),
        coords_json(col_labels, |j, a| d.axes[a].g[j], k),
    );
    Value::Object(doc)
}

pub fn write_json(value: &Value, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable report");
    text.push('\n');
    fs::write(path, text).map_err(io_err(path))?;
    Ok(())
}

fn write_csv_block(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    fs::write(path, out).map_err(io_err(path))?;
    Ok(())
}

fn coord_csv_rows(
    labels: &[String],
    coords: impl Fn(usize, usize) -> f64,
    k: usize,
) -> Vec<Vec<String>> {
    labels
        .iter()
        .enumerate()
        .map(|(i, label)| {
            let mut row = vec![csv_escape(label)];
            row.extend((0..k).map(|a| fmt_float(coords(i, a))));
            row
        })
        .collect()
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Writes the dispersions table plus row and column principal
/// coordinates. JSON emits one `<stem>_report.json`; CSV emits one file
/// per block. Returns the written paths.
pub fn write_decomposition(
    analysis: &str,
    d: &Decomposition,
    row_labels: &[String],
    col_labels: &[String],
    format: ReportFormat,
    out_dir: &Path,
    stem: &str,
) -> Result<Vec<PathBuf>> {
    match format {
        ReportFormat::Json => {
            let path = out_dir.join(format!("{stem}_report.json"));
            write_json(
                &decomposition_json(analysis, d, row_labels, col_labels),
                &path,
            )?;
            Ok(vec![path])
        }
        ReportFormat::Csv => {
            let k = d.rank();
            let disp_path = out_dir.join(format!("{stem}_dispersions.csv"));
            let rows: Vec<Vec<String>> = dispersion_rows(d)
                .into_iter()
                .map(|(axis, delta, delta2, percent)| {
                    vec![
                        axis.to_string(),
                        fmt_float(delta),
                        fmt_float(delta2),
                        fmt_float(percent),
                    ]
                })
                .collect();
            write_csv_block(
                &disp_path,
                &["axis", "delta", "delta_squared", "percent"],
                &rows,
            )?;

            let mut header: Vec<String> = vec!["label".into()];
            header.extend((1..=k).map(|a| format!("axis_{a}")));
            let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();

            let row_path = out_dir.join(format!("{stem}_row_coords.csv"));
            write_csv_block(
                &row_path,
                &header_refs,
                &coord_csv_rows(row_labels, |i, a| d.axes[a].f[i], k),
            )?;
            let col_path = out_dir.join(format!("{stem}_col_coords.csv"));
            write_csv_block(
                &col_path,
                &header_refs,
                &coord_csv_rows(col_labels, |j, a| d.axes[a].g[j], k),
            )?;
            Ok(vec![disp_path, row_path, col_path])
        }
    }
}
