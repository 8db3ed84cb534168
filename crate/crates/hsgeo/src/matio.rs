//! Dense matrix exchange: JSON objects `{"n": N, "rows": [[...], ...]}`,
//! row-major, with decimal text that round-trips binary64.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    n: usize,
    rows: Vec<Vec<f64>>,
}

pub fn matrix_from_json(text: &str) -> Result<DMatrix<f64>> {
    let file: MatrixFile =
        serde_json::from_str(text).map_err(|e| Error::MatrixFormat(e.to_string()))?;
    if file.rows.len() != file.n {
        return Err(Error::MatrixFormat(format!(
            "expected {} rows, found {}",
            file.n,
            file.rows.len()
        )));
    }
    for (k, row) in file.rows.iter().enumerate() {
        if row.len() != file.n {
            return Err(Error::MatrixFormat(format!(
                "row {} has {} entries, expected {}",
                k + 1,
                row.len(),
                file.n
            )));
        }
        if let Some(v) = row.iter().find(|v| !v.is_finite()) {
            return Err(Error::MatrixFormat(format!("non-finite entry {v} in row {}", k + 1)));
        }
    }
    Ok(DMatrix::from_fn(file.n, file.n, |r, c| file.rows[r][c]))
}

pub fn matrix_to_json(m: &DMatrix<f64>) -> String {
    let n = m.nrows();
    let rows = (0..n).map(|r| (0..n).map(|c| m[(r, c)]).collect()).collect();
    serde_json::to_string(&MatrixFile { n, rows }).expect("matrix serialization cannot fail")
}

pub fn read_matrix(path: &Path) -> Result<DMatrix<f64>> {
    matrix_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_matrix(path: &Path, m: &DMatrix<f64>) -> Result<()> {
    Ok(std::fs::write(path, matrix_to_json(m))?)
}
