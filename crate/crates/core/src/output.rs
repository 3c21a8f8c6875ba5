// Copyright 2026 The photonic-mott Authors
// SPDX-License-Identifier: Apache-2.0

//! Run artifacts and their files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::error::{Error, Result};
use crate::observables::TimeSeries;

pub const CONFIG_ECHO: &str = "run_config.echo";
pub const TIMESERIES: &str = "timeseries.csv";
pub const SUMMARY: &str = "summary.json";
pub const DEVIATIONS: &str = "deviations.csv";
pub const SCAN: &str = "scan.csv";

/// Rows of real values under named columns.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::TimeSeries(format!(
                "row has {} values for {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (k, v) in row.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write!(out, "{v:.16e}").expect("writing to a String");
            }
            out.push('\n');
        }
        out
    }
}

/// Everything a command produces. `None` entries are not written.
#[derive(Debug, Clone, Default)]
pub struct Artifacts {
    pub config_echo: Option<String>,
    pub timeseries: Option<TimeSeries>,
    pub deviations: Option<TimeSeries>,
    pub table: Option<Table>,
    pub summary: Value,
}

impl Artifacts {
    pub fn summary_text(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.summary).expect("JSON values serialize");
        text.push('\n');
        text
    }

    /// Writes the artifacts into `dir`, creating it if needed, and returns
    /// the paths written.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let mut put = |name: &str, text: &str| -> Result<()> {
            let path = dir.join(name);
            fs::write(&path, text)?;
            written.push(path);
            Ok(())
        };
        if let Some(echo) = &self.config_echo {
            put(CONFIG_ECHO, echo)?;
        }
        if let Some(series) = &self.timeseries {
            put(TIMESERIES, &series.to_csv())?;
        }
        if let Some(dev) = &self.deviations {
            put(DEVIATIONS, &dev.to_csv())?;
        }
        if let Some(table) = &self.table {
            put(SCAN, &table.to_csv())?;
        }
        put(SUMMARY, &self.summary_text())?;
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_csv_layout() {
        let mut t = Table::new(vec!["x".into(), "y".into()]);
        t.push(vec![1.0, 0.5]).unwrap();
        assert!(t.push(vec![1.0]).is_err());
        assert_eq!(t.to_csv(), "x,y\n1.0000000000000000e0,5.0000000000000000e-1\n");
        assert_eq!(t.column("y"), Some(vec![0.5]));
    }

    #[test]
    fn writes_only_present_files() {
        let dir = tempfile::tempdir().unwrap();
        let artifacts = Artifacts {
            config_echo: Some("cap = 3\n".into()),
            summary: serde_json::json!({"U": 1.0}),
            ..Default::default()
        };
        let written = artifacts.write(dir.path()).unwrap();
        assert_eq!(written.len(), 2);
        assert!(dir.path().join(CONFIG_ECHO).exists());
        assert!(!dir.path().join(TIMESERIES).exists());
    }
}
