use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};

/// Formats a value for CSV; `None` becomes an empty cell.
pub fn cell<V: Into<Option<f64>>>(v: V) -> String {
    v.into().map(|x| x.to_string()).unwrap_or_default()
}

/// Header plus rows of already formatted cells.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Self { header: header.iter().map(|h| h.as_ref().to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for r in &self.rows {
            out.write_record(r)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write(&self, path: Option<&Path>) -> Result<()> {
        match path {
            Some(p) => {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir)?;
                }
                let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
                self.write_to(f)
            }
            None => self.write_to(io::stdout().lock()),
        }
    }

    /// Appends rows, writing the header only when the file is new or empty.
    pub fn append(&self, path: &Path) -> Result<()> {
        let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
        let f = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .with_context(|| format!("opening {}", path.display()))?;
        let mut out = csv::Writer::from_writer(f);
        if fresh {
            out.write_record(&self.header)?;
        }
        for r in &self.rows {
            out.write_record(r)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Numeric column by name, skipping empty cells.
    pub fn column(&self, name: &str) -> Vec<Option<f64>> {
        let Some(i) = self.header.iter().position(|h| h == name) else { return Vec::new() };
        self.rows.iter().map(|r| r[i].parse().ok()).collect()
    }
}

pub fn print_json<T: serde::Serialize>(v: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}
