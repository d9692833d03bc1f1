use std::fs;
use std::path::Path;

use crate::CliError;

/// Reads one real per line; blank lines and `#` comments are skipped.
pub fn read_column_text(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_value(line, path, i + 1)?);
    }
    Ok(out)
}

/// Reads one column of a headed CSV file, selected by name or zero-based index.
pub fn read_column_csv(path: &Path, column: &str) -> Result<Vec<f64>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::Usage(format!("bad CSV header in {}: {e}", path.display())))?
        .clone();
    let index = match headers.iter().position(|h| h == column) {
        Some(i) => i,
        None => column
            .parse::<usize>()
            .ok()
            .filter(|&i| i < headers.len())
            .ok_or_else(|| {
                CliError::Usage(format!("no column {column:?} in {}", path.display()))
            })?,
    };
    let mut out = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record
            .map_err(|e| CliError::Usage(format!("bad CSV row in {}: {e}", path.display())))?;
        let field = record.get(index).unwrap_or("");
        if field.is_empty() {
            continue;
        }
        out.push(parse_value(field, path, row + 2)?);
    }
    Ok(out)
}

fn parse_value(s: &str, path: &Path, line: usize) -> Result<f64, CliError> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::Usage(format!(
            "{}:{line}: not a finite number: {s:?}",
            path.display()
        ))),
    }
}
