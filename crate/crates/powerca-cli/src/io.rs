//! CSV ingestion and table export.
//!
//! Input format: UTF-8, comma-delimited, decimal-point reals, optional
//! header row, optional first-column row labels. Missing labels are
//! generated as `R1..RI` / `C1..CJ`.

use std::path::Path;

use nalgebra::DMatrix;
use powerca::ContingencyTable;

use crate::error::{io_err, CliError, Result};

pub fn read_table(path: &Path, has_row_labels: bool, has_header: bool) -> Result<ContingencyTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| translate_csv(path, e))?;

    let mut records: Vec<csv::StringRecord> = Vec::new();
    for record in reader.records() {
        records.push(record.map_err(|e| translate_csv(path, e))?);
    }
    if records.is_empty() {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            line: 1,
            col: 1,
            message: "empty file".into(),
        });
    }

    let mut col_labels: Option<Vec<String>> = None;
    let mut body_start_line = 1;
    if has_header {
        let header = &records[0];
        let skip = usize::from(has_row_labels);
        col_labels = Some(header.iter().skip(skip).map(str::to_string).collect());
        body_start_line = 2;
    }

    let body = &records[if has_header { 1 } else { 0 }..];
    if body.is_empty() {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            line: body_start_line,
            col: 1,
            message: "no data rows".into(),
        });
    }

    let label_offset = usize::from(has_row_labels);
    let width = body[0].len();
    let ncols = width.saturating_sub(label_offset);
    let mut row_labels = Vec::with_capacity(body.len());
    let mut values: Vec<f64> = Vec::with_capacity(body.len() * ncols);

    for (r, record) in body.iter().enumerate() {
        let line = body_start_line + r;
        if record.len() != width {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                line,
                col: record.len().max(1),
                message: format!(
                    "ragged row: expected {width} fields, found {}",
                    record.len()
                ),
            });
        }
        row_labels.push(if has_row_labels {
            record[0].to_string()
        } else {
            format!("R{}", r + 1)
        });
        for (c, field) in record.iter().skip(label_offset).enumerate() {
            let value: f64 = field.parse().map_err(|_| CliError::Parse {
                path: path.to_path_buf(),
                line,
                col: label_offset + c + 1,
                message: format!("expected a number, found {field:?}"),
            })?;
            if value < 0.0 {
                return Err(CliError::NegativeEntry { row: r, col: c });
            }
            values.push(value);
        }
    }

    let nrows = body.len();
    let col_labels = col_labels.unwrap_or_else(|| (1..=ncols).map(|j| format!("C{j}")).collect());
    if col_labels.len() != ncols {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            line: 1,
            col: col_labels.len().max(1),
            message: format!(
                "header has {} column labels for {ncols} data columns",
                col_labels.len()
            ),
        });
    }
    let matrix = DMatrix::from_fn(nrows, ncols, |i, j| values[i * ncols + j]);
    Ok(ContingencyTable::new(matrix, row_labels, col_labels)?)
}

fn translate_csv(path: &Path, err: csv::Error) -> CliError {
    let (line, col) = match err.position() {
        Some(pos) => (pos.line() as usize, 1),
        None => (1, 1),
    };
    match err.kind() {
        csv::ErrorKind::Io(_) => {
            let io = match err.into_kind() {
                csv::ErrorKind::Io(io) => io,
                _ => unreachable!(),
            };
            CliError::Io {
                path: path.to_path_buf(),
                source: io,
            }
        }
        other => CliError::Parse {
            path: path.to_path_buf(),
            line,
            col,
            message: format!("{other:?}"),
        },
    }
}

/// Writes a labeled table as CSV: header row with column labels, one
/// label field per data row. Values use the shortest round-trip float
/// form, so integer tables round-trip exactly.
pub fn write_table(table: &ContingencyTable, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| translate_csv(path, e))?;
    let mut header = vec![String::new()];
    header.extend(table.col_labels().iter().cloned());
    writer
        .write_record(&header)
        .map_err(|e| translate_csv(path, e))?;
    for i in 0..table.nrows() {
        let mut record = vec![table.row_labels()[i].clone()];
        record.extend((0..table.ncols()).map(|j| table.get(i, j).to_string()));
        writer
            .write_record(&record)
            .map_err(|e| translate_csv(path, e))?;
    }
    writer.flush().map_err(io_err(path))?;
    Ok(())
}

/// Writes an unconstrained real matrix (log transforms may be
/// negative) with the labels of its source table.
pub fn write_matrix(
    matrix: &DMatrix<f64>,
    row_labels: &[String],
    col_labels: &[String],
    path: &Path,
) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| translate_csv(path, e))?;
    let mut header = vec![String::new()];
    header.extend(col_labels.iter().cloned());
    writer
        .write_record(&header)
        .map_err(|e| translate_csv(path, e))?;
    for i in 0..matrix.nrows() {
        let mut record = vec![row_labels[i].clone()];
        record.extend((0..matrix.ncols()).map(|j| matrix[(i, j)].to_string()));
        writer
            .write_record(&record)
            .map_err(|e| translate_csv(path, e))?;
    }
    writer.flush().map_err(io_err(path))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn labeled_body_without_header() {
        let f = write_tmp("a,1,2\nb,3,4\n");
        let t = read_table(f.path(), true, false).unwrap();
        assert_eq!(t.row_labels(), &["a".to_string(), "b".to_string()]);
        assert_eq!(t.col_labels(), &["C1".to_string(), "C2".to_string()]);
        assert_eq!(t.get(0, 0), 1.0);
        assert_eq!(t.get(1, 1), 4.0);
    }

    #[test]
    fn header_and_labels() {
        let f = write_tmp(",x,y\nr1,1,2\nr2,3,4\n");
        let t = read_table(f.path(), true, true).unwrap();
        assert_eq!(t.col_labels(), &["x".to_string(), "y".to_string()]);
        assert_eq!(t.row_labels(), &["r1".to_string(), "r2".to_string()]);
    }

    #[test]
    fn bare_numeric_body() {
        let f = write_tmp("1,2,3\n4,5,6\n");
        let t = read_table(f.path(), false, false).unwrap();
        assert_eq!(t.nrows(), 2);
        assert_eq!(t.ncols(), 3);
        assert_eq!(t.row_labels()[1], "R2");
        assert_eq!(t.col_labels()[2], "C3");
    }

    #[test]
    fn ragged_rows_are_parse_errors() {
        let f = write_tmp("a,1,2\nb,3\n");
        match read_table(f.path(), true, false) {
            Err(CliError::Parse { line: 2, .. }) => {}
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn bad_number_reports_position() {
        let f = write_tmp("a,1,2\nb,3,oops\n");
        match read_table(f.path(), true, false) {
            Err(CliError::Parse {
                line: 2,
                col: 3,
                message,
                ..
            }) => {
                assert!(message.contains("oops"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn negative_entries_are_rejected() {
        let f = write_tmp("1,2\n-3,4\n");
        match read_table(f.path(), false, false) {
            Err(CliError::NegativeEntry { row: 1, col: 0 }) => {}
            other => panic!("expected NegativeEntry, got {other:?}"),
        }
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = read_table(Path::new("/nonexistent/table.csv"), true, true).unwrap_err();
        assert_eq!(err.exit_code(), 4);
    }

    #[test]
    fn write_then_read_round_trips() {
        let t = ContingencyTable::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 0.0, 6.0]]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_table(&t, &path).unwrap();
        let back = read_table(&path, true, true).unwrap();
        assert_eq!(back.values(), t.values());
        assert_eq!(back.row_labels(), t.row_labels());
        assert_eq!(back.col_labels(), t.col_labels());
    }
}
