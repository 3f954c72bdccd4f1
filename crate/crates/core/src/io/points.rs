use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::open;
use crate::error::{Error, FormatError};
use crate::metrics::PointSet;
use crate::ultra::DenseMatrix;

/// Size limits applied while reading CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CsvLimits {
    pub max_rows: usize,
    pub max_cols: usize,
}

impl Default for CsvLimits {
    fn default() -> Self {
        CsvLimits {
            max_rows: 1_000_000,
            max_cols: 512,
        }
    }
}

/// `{"points": [[x, y, ...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointsFile {
    pub points: Vec<Vec<f64>>,
}

/// `{"matrix": [[d00, d01, ...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub matrix: Vec<Vec<f64>>,
}

/// Reads numeric CSV, one point per row. A first row that does not parse
/// as numbers is taken as a header.
pub fn read_points_csv<R: Read>(r: R, limits: CsvLimits) -> Result<PointSet, Error> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(r);
    let mut dim = None;
    let mut data = Vec::new();
    let mut rows = 0usize;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(FormatError::from)?;
        if record.len() > limits.max_cols {
            return Err(FormatError::Limit {
                what: "column",
                limit: limits.max_cols,
            }
            .into());
        }
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if i == 0 => continue,
            Err(e) => {
                return Err(FormatError::BadRow {
                    row: i + 1,
                    detail: e.to_string(),
                }
                .into())
            }
        };
        match dim {
            None => dim = Some(values.len()),
            Some(d) if d != values.len() => {
                return Err(FormatError::BadRow {
                    row: i + 1,
                    detail: format!("expected {d} columns, found {}", values.len()),
                }
                .into())
            }
            _ => {}
        }
        rows += 1;
        if rows > limits.max_rows {
            return Err(FormatError::Limit {
                what: "row",
                limit: limits.max_rows,
            }
            .into());
        }
        data.extend(values);
    }
    Ok(PointSet::from_flat(dim.unwrap_or(0).max(1), data)?)
}

pub fn read_points_json<R: Read>(r: R) -> Result<PointSet, Error> {
    let file: PointsFile = serde_json::from_reader(r).map_err(FormatError::from)?;
    Ok(PointSet::new(file.points)?)
}

pub fn write_points_csv<W: Write>(w: W, points: &PointSet) -> Result<(), FormatError> {
    let mut writer = csv::Writer::from_writer(w);
    for p in points.iter() {
        writer.write_record(p.iter().map(|x| x.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads `{"matrix": ...}` into a square matrix.
pub fn read_matrix_json<R: Read>(r: R) -> Result<DenseMatrix, Error> {
    let file: MatrixFile = serde_json::from_reader(r).map_err(FormatError::from)?;
    Ok(DenseMatrix::from_rows(file.matrix)?)
}

/// Loads points by extension: `.json` as JSON, anything else as CSV.
pub fn load_points(path: impl AsRef<Path>, limits: CsvLimits) -> Result<PointSet, Error> {
    let path = path.as_ref();
    let r = open(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("json") => read_points_json(r),
        _ => read_points_csv(r, limits),
    }
}
