//! Matrix files: either the JSON wire format or one row per line (`*` on the diagonal).

use std::path::Path;

use quasicone_core::QuasiconeMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileFormat {
    Json,
    Rows,
}

pub fn parse_matrix(text: &str) -> Result<(QuasiconeMatrix, FileFormat), String> {
    if text.trim_start().starts_with('{') {
        QuasiconeMatrix::from_json(text).map(|m| (m, FileFormat::Json)).map_err(|e| e.to_string())
    } else {
        QuasiconeMatrix::parse_rows(text).map(|m| (m, FileFormat::Rows)).map_err(|e| e.to_string())
    }
}

pub fn read_matrix(path: &Path) -> Result<(QuasiconeMatrix, FileFormat), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_matrix(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn render_matrix(m: &QuasiconeMatrix, format: FileFormat) -> String {
    match format {
        FileFormat::Json => m.to_json() + "\n",
        FileFormat::Rows => m.to_rows_string().replace(" / ", "\n") + "\n",
    }
}
