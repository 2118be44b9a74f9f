use std::fs;
use std::path::Path;

use super::DataError;
use crate::climate::TempParams;

/// Two-layer parameters per model: name, c1, c3, c4, equilibrium sensitivity, doubling forcing.
pub const GEOFFROY_MODELS: [(&str, f64, f64, f64, f64, f64); 3] = [
    ("MMM", 0.137, 0.73, 0.00689, 3.25, 3.45),
    ("HadGEM2-ES", 0.154, 0.55, 0.00671, 4.55, 2.95),
    ("GISS-E2-R", 0.213, 1.16, 0.00921, 2.15, 3.65),
];

/// Per-year temperature parameters for a named model; matching is case-insensitive.
pub fn geoffroy_params(name: &str) -> Result<TempParams<f64>, DataError> {
    let (_, c1, c3, c4, ecs, f2x) = GEOFFROY_MODELS
        .iter()
        .find(|m| m.0.eq_ignore_ascii_case(name.trim()))
        .ok_or_else(|| DataError::UnknownModel(name.to_string()))?;
    Ok(TempParams::new(*c1, *c3, *c4, *f2x, *ecs)?)
}

/// Reads a `model,c1,c3,c4,t2xco2,f2xco2` table.
pub fn load_geoffroy_table(path: &Path) -> Result<Vec<(String, TempParams<f64>)>, DataError> {
    let text = fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let name = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| DataError::Parse {
            name: name.clone(),
            line: 0,
            msg: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let num = |i: usize| -> Result<f64, DataError> {
            record
                .get(i)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| DataError::Parse {
                    name: name.clone(),
                    line,
                    msg: format!("bad column {}", i),
                })
        };
        let params = TempParams::new(num(1)?, num(2)?, num(3)?, num(5)?, num(4)?)?;
        out.push((record.get(0).unwrap_or("").to_string(), params));
    }
    if out.is_empty() {
        return Err(DataError::Empty(name));
    }
    Ok(out)
}
