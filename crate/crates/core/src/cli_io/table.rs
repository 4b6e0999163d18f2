use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Named numeric table with `key: value` header entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub name: String,
    pub header: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Version string baked in at build time (git describe when available).
pub fn build_tag() -> &'static str {
    env!("NONEQCP_BUILD_TAG")
}

/// Header entries recording the pinned constants used for unit conversion.
pub fn constants_header() -> Vec<(String, String)> {
    vec![
        ("hbar_c_eV_nm".into(), format!("{:e}", units::HBAR_C_EV_NM)),
        ("hbar_eV_s".into(), format!("{:e}", units::HBAR_EV_S)),
        ("k_B_eV_per_K".into(), format!("{:e}", units::K_B_EV_PER_K)),
        ("newton_per_eV2".into(), format!("{:e}", units::NEWTON_PER_EV2)),
    ]
}

impl ResultTable {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        ResultTable {
            name: name.into(),
            header: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_header(&mut self, key: impl Into<String>, value: impl Into<String>) {
        let value: String = value.into();
        self.header.push((key.into(), value.replace('\n', " ")));
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn header_value(&self, key: &str) -> Option<&str> {
        self.header.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// `#` header lines, a `# columns:` line, then comma-separated rows with
    /// 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# table: {}", self.name);
        for (k, v) in &self.header {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let _ = writeln!(out, "# columns: {}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut name = None;
        let mut header = Vec::new();
        let mut columns = None;
        let mut rows = Vec::new();
        for line in text.lines() {
            if let Some(rest) = line.strip_prefix("# ") {
                let (k, v) = rest
                    .split_once(": ")
                    .ok_or_else(|| Error::scenario(format!("malformed header line {line:?}")))?;
                match k {
                    "table" if name.is_none() => name = Some(v.to_string()),
                    "columns" => columns = Some(v.split(',').map(str::to_string).collect::<Vec<_>>()),
                    _ => header.push((k.to_string(), v.to_string())),
                }
            } else if !line.trim().is_empty() {
                let row = line
                    .split(',')
                    .map(|c| c.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::scenario(format!("bad number in {line:?}: {e}")))?;
                rows.push(row);
            }
        }
        let columns = columns.ok_or_else(|| Error::scenario("missing '# columns:' line"))?;
        if let Some(r) = rows.iter().find(|r| r.len() != columns.len()) {
            return Err(Error::scenario(format!("row has {} cells, expected {}", r.len(), columns.len())));
        }
        Ok(ResultTable {
            name: name.unwrap_or_default(),
            header,
            columns,
            rows,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => Ok(self.to_csv()),
            Format::Json => self.to_json(),
        }
    }
}

/// Write a table to `path` in the given format.
pub fn emit(table: &ResultTable, format: Format, path: &Path) -> Result<()> {
    std::fs::write(path, table.render(format)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let mut t = ResultTable::new("demo", &["z_m", "f_N"]);
        t.push_header("mode", "eq");
        t.push_row(vec![1e-6, -1.234_567_890_123_456_7e-23]);
        t.push_row(vec![0.1 + 0.2, f64::MIN_POSITIVE]);
        let back = ResultTable::from_csv(&t.to_csv()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = ResultTable::new("empty", &["a"]);
        let csv = t.to_csv();
        assert!(csv.lines().all(|l| l.starts_with('#')));
        assert_eq!(ResultTable::from_csv(&csv).unwrap(), t);
    }

    #[test]
    fn json_round_trip() {
        let mut t = ResultTable::new("demo", &["x"]);
        t.push_row(vec![std::f64::consts::PI]);
        let back: ResultTable = serde_json::from_str(&t.to_json().unwrap()).unwrap();
        assert_eq!(back, t);
    }
}
