use std::path::Path;

use serde::Deserialize;

use regdom::linalg::from_rows;
use regdom::Matrix;

use crate::{CliError, CliResult};

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixFile {
    Wrapped { rows: Vec<Vec<f64>> },
    Bare(Vec<Vec<f64>>),
}

/// Reads a matrix stored as `{"rows": [...]}` or as a bare array of rows.
pub fn read_matrix(path: &Path) -> CliResult<Matrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn parse_matrix(text: &str) -> Result<Matrix, String> {
    if text.trim().is_empty() {
        return Err("empty matrix file".into());
    }
    let rows = match serde_json::from_str(text).map_err(|e| e.to_string())? {
        MatrixFile::Wrapped { rows } | MatrixFile::Bare(rows) => rows,
    };
    from_rows(&rows).map_err(|e| e.to_string())
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}
