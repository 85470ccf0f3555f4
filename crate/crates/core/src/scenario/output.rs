// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{ScenarioConfig, ScenarioError};

/// One CSV field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(u64),
    Bool(bool),
    /// Not applicable at this row.
    Empty,
}

impl Cell {
    /// 12 significant digits, `.` as decimal separator.
    pub fn render(&self) -> String {
        match *self {
            Cell::Real(v) => format!("{v:.11e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => u8::from(v).to_string(),
            Cell::Empty => String::new(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Real(v) => Some(v),
            Cell::Int(v) => Some(v as f64),
            Cell::Bool(v) => Some(f64::from(u8::from(v))),
            Cell::Empty => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File stem of the CSV and of the plot.
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Columns drawn against column 0.
    pub plot_columns: Vec<usize>,
    pub xlabel: String,
    pub ylabel: String,
}

impl Table {
    pub fn new(name: &str, header: &[&str], xlabel: &str, ylabel: &str) -> Self {
        Table {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
            plot_columns: (1..header.len()).collect(),
            xlabel: xlabel.into(),
            ylabel: ylabel.into(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k].as_f64()).collect())
    }

    pub fn to_csv(&self) -> Result<String, ScenarioError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| ScenarioError::Output {
            path: PathBuf::from(format!("{}.csv", self.name)),
            message: e.to_string(),
        };
        w.write_record(&self.header).map_err(fail)?;
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.header.len());
            w.write_record(row.iter().map(Cell::render)).map_err(fail)?;
        }
        let bytes = w.into_inner().map_err(|e| ScenarioError::Output {
            path: PathBuf::from(format!("{}.csv", self.name)),
            message: e.to_string(),
        })?;
        Ok(String::from_utf8(bytes).expect("CSV output is ASCII"))
    }

    fn gnuplot_block(&self, out: &mut String) {
        let csv = format!("{}.csv", self.name);
        let _ = writeln!(out, "set output '{}.png'", self.name);
        let _ = writeln!(out, "set xlabel '{}'", self.xlabel);
        let _ = writeln!(out, "set ylabel '{}'", self.ylabel);
        let series: Vec<String> = self
            .plot_columns
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let file = if i == 0 {
                    format!("'{csv}'")
                } else {
                    "''".to_string()
                };
                format!(
                    "{file} using 1:{} with linespoints pointsize 0.4 title '{}'",
                    c + 1,
                    self.header[c].replace('_', "\\_")
                )
            })
            .collect();
        let _ = writeln!(out, "plot {}", series.join(", \\\n     "));
        out.push('\n');
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Conventions {
    pub vacuum_variance: f64,
    pub log_negativity: &'static str,
    pub quadratures: &'static str,
    pub units: &'static str,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            vacuum_variance: 0.5,
            log_negativity: "natural log",
            quadratures:
                "x = (o + o^dag)/sqrt(2), p = (o - o^dag)/(i sqrt(2)); order x1 p1 xb pb x2 p2",
            units: "rates in G, time in 1/G",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub library: &'static str,
    pub version: &'static str,
    pub conventions: Conventions,
    pub scenario: String,
    pub config: ScenarioConfig,
    pub files: Vec<String>,
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
}

/// Tables plus the manifest describing how they were produced.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultBundle {
    pub tables: Vec<Table>,
    pub manifest: Manifest,
    /// Paths written by [`ResultBundle::write`].
    pub written: Vec<PathBuf>,
}

pub(crate) struct Evaluated {
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
}

impl ResultBundle {
    pub(crate) fn new(config: ScenarioConfig, out: Evaluated) -> Self {
        let name = config.scenario.name();
        let mut files: Vec<String> = out
            .tables
            .iter()
            .map(|t| format!("{}.csv", t.name))
            .collect();
        files.push(format!("{name}.gp"));
        files.push("manifest.json".into());
        ResultBundle {
            manifest: Manifest {
                library: env!("CARGO_PKG_NAME"),
                version: crate::VERSION,
                conventions: Conventions::default(),
                scenario: name.into(),
                config,
                files,
                notes: out.notes,
                warnings: out.warnings,
            },
            tables: out.tables,
            written: Vec::new(),
        }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn gnuplot_script(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {} {}", self.manifest.library, self.manifest.version);
        let _ = writeln!(s, "# gnuplot {}.gp", self.manifest.scenario);
        s.push_str("set datafile separator ','\nset terminal pngcairo size 960,640\nset key outside\nset grid\n\n");
        for t in &self.tables {
            t.gnuplot_block(&mut s);
        }
        s
    }

    pub fn manifest_json(&self) -> String {
        serde_json::to_string_pretty(&self.manifest).expect("manifest serializes") + "\n"
    }

    pub fn write(&mut self, dir: &Path) -> Result<(), ScenarioError> {
        let io = |path: &Path, e: std::io::Error| ScenarioError::Output {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        let mut files = Vec::new();
        for t in &self.tables {
            files.push((dir.join(format!("{}.csv", t.name)), t.to_csv()?));
        }
        files.push((
            dir.join(format!("{}.gp", self.manifest.scenario)),
            self.gnuplot_script(),
        ));
        files.push((dir.join("manifest.json"), self.manifest_json()));
        for (path, body) in files {
            std::fs::write(&path, body).map_err(|e| io(&path, e))?;
            self.written.push(path);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(Cell::Real(0.1).render(), "1.00000000000e-1");
        assert_eq!(Cell::Real(-1234.5678901234).render(), "-1.23456789012e3");
        assert_eq!(Cell::Int(7).render(), "7");
        assert_eq!(Cell::Empty.render(), "");
    }

    #[test]
    fn csv_has_header_row() {
        let mut t = Table::new("x", &["t", "y"], "t", "y");
        t.rows.push(vec![Cell::Real(0.0), Cell::Real(1.0)]);
        let csv = t.to_csv().unwrap();
        assert_eq!(csv.lines().next(), Some("t,y"));
        assert_eq!(csv.lines().count(), 2);
    }
}
