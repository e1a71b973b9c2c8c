//! Column-oriented numeric output in CSV or JSON.
//!
//! Numbers are written with 17 significant digits in scientific notation, so
//! output is locale-independent and reproducible byte for byte.

use std::io::Write;

use serde::Serialize;

use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    /// Free-form description lines, emitted as `# ` comments in CSV.
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            comments: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn comment(mut self, line: impl Into<String>) -> Self {
        self.comments.push(line.into());
        self
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| format_number(*x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("finite table serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Writes to `path`, or to stdout when `path` is `None` or `-`.
pub fn emit(text: &str, path: Option<&std::path::Path>) -> CliResult<()> {
    match path {
        Some(p) if p.as_os_str() != "-" && p.as_os_str() != "stdout" => std::fs::write(p, text)?,
        _ => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(vec!["a".into(), "b".into()]).comment("demo");
        t.rows.push(vec![0.1, 4.0]);
        assert_eq!(t.to_csv(), "# demo\na,b\n1.0000000000000001e-1,4.0000000000000000e0\n");
        assert_eq!(t.column("b").unwrap(), vec![4.0]);
        assert!(t.column("c").is_none());
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [std::f64::consts::PI, 1.0 / 3.0, 1e-300, -2.5e17] {
            assert_eq!(format_number(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_layout() {
        let mut t = Table::new(vec!["x".into()]);
        t.rows.push(vec![0.5]);
        let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["columns"][0], "x");
        assert_eq!(v["rows"][0][0], 0.5);
    }
}
