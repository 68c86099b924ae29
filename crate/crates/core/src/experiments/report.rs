use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::Result;

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

/// Formats with 12 significant digits: plain decimals for moderate
/// magnitudes, scientific notation otherwise.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let exponent = v.abs().log10().floor() as i32;
    if (-4..12).contains(&exponent) {
        let decimals = (11 - exponent).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{v:.11e}")
    }
}

impl Value {
    fn render(&self) -> String {
        match self {
            Value::Int(i) => i.to_string(),
            Value::Float(f) => format_float(*f),
            Value::Text(t) if t.contains([',', '"', '\n']) => format!("\"{}\"", t.replace('"', "\"\"")),
            Value::Text(t) => t.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Float(f) => Some(*f),
            Value::Text(_) => None,
        }
    }
}

/// A bound checked on the results of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub name: String,
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub probes: Vec<Probe>,
    /// Failures (solver or setup) that aborted part of the experiment.
    pub errors: Vec<String>,
}

impl ExperimentReport {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            metadata: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            probes: Vec::new(),
            errors: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width of report {}", self.name);
        self.rows.push(row);
    }

    pub fn probe(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.probes.push(Probe {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn record_error(&mut self, message: impl Into<String>) {
        self.errors.push(message.into());
    }

    pub fn violations(&self) -> impl Iterator<Item = &Probe> {
        self.probes.iter().filter(|p| !p.passed)
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Rows whose text columns match every `(column, value)` pair.
    pub fn select<'a>(&'a self, filters: &'a [(&'a str, &'a str)]) -> impl Iterator<Item = &'a Vec<Value>> + 'a {
        self.rows.iter().filter(move |row| {
            filters.iter().all(|(c, v)| {
                self.column(c)
                    .map(|i| matches!(&row[i], Value::Text(t) if t == v))
                    .unwrap_or(false)
            })
        })
    }

    pub fn float(&self, row: &[Value], column: &str) -> Option<f64> {
        self.column(column).and_then(|i| row[i].as_f64())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}").unwrap();
        }
        for p in &self.probes {
            let status = if p.passed { "pass" } else { "FAIL" };
            writeln!(out, "# probe {status}: {} ({})", p.name, p.detail).unwrap();
        }
        writeln!(out, "{}", self.columns.join(",")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Value::render).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }

    /// Writes `<dir>/<name>.csv`, creating `dir` if needed.
    pub fn write_csv(&self, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.csv", self.name));
        std::fs::write(&path, self.to_csv())?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(0.1), "0.1");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_float(123.456), "123.456");
        assert_eq!(format_float(2.0 / 3.0 * 1e-7), "6.66666666667e-8");
        assert_eq!(format_float(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_layout() {
        let mut r = ExperimentReport::new("demo", &["level", "name", "value"]);
        r.metadata.push(("experiment".into(), "demo".into()));
        r.push_row(vec![2usize.into(), "a,b".into(), 0.5.into()]);
        r.probe("bound", false, "0.5 > 0.4");
        let csv = r.to_csv();
        assert_eq!(
            csv,
            "# experiment: demo\n# probe FAIL: bound (0.5 > 0.4)\nlevel,name,value\n2,\"a,b\",0.5\n"
        );
        assert_eq!(r.violations().count(), 1);
    }
}
