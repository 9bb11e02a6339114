//! Matrix files in the JSON exchange format.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

fn io_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    Ok(ComplexMatrix::from_json_str(&text)?)
}

pub fn write_matrix(path: impl AsRef<Path>, m: &ComplexMatrix) -> Result<()> {
    let path = path.as_ref();
    let mut text = m.to_json_string();
    text.push('\n');
    fs::write(path, text).map_err(|e| io_error(path, e))
}
