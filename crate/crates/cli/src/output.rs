//! CSV tables and their gnuplot companions.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;
use crate::format::decimal;

/// How to draw a table.
#[derive(Debug, Clone)]
pub struct Plot {
    pub title: String,
    pub xlabel: &'static str,
    pub ylabel: &'static str,
    /// 1-based column of the abscissa.
    pub x: usize,
    /// 1-based ordinate columns and their legend entries.
    pub series: Vec<(usize, String)>,
    pub log_x: bool,
    pub log_y: bool,
    pub style: &'static str,
}

/// One CSV file worth of results.
#[derive(Debug, Clone)]
pub struct Table {
    /// File stem; the CSV is `<name>.csv` and the script `<name>.gp`.
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub plot: Plot,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&'static str], plot: Plot) -> Self {
        Table {
            name: name.into(),
            header: header.to_vec(),
            rows: Vec::new(),
            plot,
        }
    }

    pub fn push_numbers(&mut self, values: &[f64]) {
        self.rows.push(values.iter().map(|&v| decimal(v)).collect());
    }

    pub fn push(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }

    /// Writes `<dir>/<name>.csv` and `<dir>/<name>.gp`; returns both paths.
    pub fn write(&self, dir: &Path) -> Result<[PathBuf; 2], CliError> {
        let csv_path = dir.join(format!("{}.csv", self.name));
        let csv_err = |source| CliError::Csv {
            path: csv_path.clone(),
            source,
        };
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(&csv_path)
            .map_err(csv_err)?;
        w.write_record(&self.header).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row).map_err(csv_err)?;
        }
        w.flush().map_err(|source| CliError::Io {
            path: csv_path.clone(),
            source,
        })?;

        let gp_path = dir.join(format!("{}.gp", self.name));
        write_text(&gp_path, &self.gnuplot())?;
        Ok([csv_path, gp_path])
    }

    fn gnuplot(&self) -> String {
        let p = &self.plot;
        let mut s = String::new();
        s.push_str(&format!("# gnuplot -p {}.gp\n", self.name));
        s.push_str("set datafile separator \",\"\n");
        s.push_str("set terminal pngcairo size 900,600\n");
        s.push_str(&format!("set output \"{}.png\"\n", self.name));
        s.push_str(&format!("set title \"{}\"\n", p.title));
        s.push_str(&format!("set xlabel \"{}\"\n", p.xlabel));
        s.push_str(&format!("set ylabel \"{}\"\n", p.ylabel));
        if p.log_x {
            s.push_str("set logscale x\n");
        }
        if p.log_y {
            s.push_str("set logscale y\n");
        }
        s.push_str("set grid\nset key left top\n");
        let parts: Vec<String> = p
            .series
            .iter()
            .enumerate()
            .map(|(i, (col, title))| {
                let file = if i == 0 {
                    format!("\"{}.csv\"", self.name)
                } else {
                    "\"\"".into()
                };
                format!("{file} skip 1 using {}:{col} with {} title \"{title}\"", p.x, p.style)
            })
            .collect();
        s.push_str(&format!("plot {}\n", parts.join(", \\\n     ")));
        s
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
