use std::fs;
use std::path::Path;

use super::ScenarioError;

/// Column-oriented result with a leading `year` axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub years: Vec<f64>,
    pub columns: Vec<(String, Vec<f64>)>,
}

impl ResultTable {
    pub fn new(years: Vec<f64>) -> Self {
        Self {
            years,
            columns: Vec::new(),
        }
    }

    pub fn with(mut self, name: &str, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), self.years.len(), "column `{}` length", name);
        self.columns.push((name.to_string(), values));
        self
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|c| c.0 == name).map(|c| c.1.as_slice())
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("year");
        for (name, _) in &self.columns {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (k, y) in self.years.iter().enumerate() {
            out.push_str(&y.to_string());
            for (_, v) in &self.columns {
                out.push(',');
                out.push_str(&v[k].to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), ScenarioError> {
        fs::write(path, self.to_csv_string()).map_err(|source| ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let t = ResultTable::new(vec![0.0, 1.0]).with("t_at", vec![0.0, 0.25]);
        assert_eq!(t.to_csv_string(), "year,t_at\n0,0\n1,0.25\n");
        assert_eq!(t.column("t_at"), Some(&[0.0, 0.25][..]));
        assert!(t.column("x").is_none());
    }
}
