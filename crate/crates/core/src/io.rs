//! CSV and JSON persistence.
//!
//! Floats are written in shortest round-trip form, so every value re-reads
//! bit for bit. Root files have the header `re,im`; critical-point files
//! `re,im,multiplicity,residual`.

use std::fs::{self, File};
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyroots::{CriticalPoint, CriticalPointSet};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootRow {
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CritRow {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
    pub residual: f64,
}

impl From<&CriticalPoint> for CritRow {
    fn from(p: &CriticalPoint) -> Self {
        Self {
            re: p.location.re,
            im: p.location.im,
            multiplicity: p.multiplicity,
            residual: p.residual,
        }
    }
}

impl CritRow {
    pub fn location(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Writes serializable rows as CSV with a header.
pub fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads CSV rows with a header. Malformed input is a parse error.
pub fn read_rows<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    r.deserialize()
        .map(|row| row.map_err(|e| Error::Parse(format!("{}: {e}", path.display()))))
        .collect()
}

pub fn read_roots(path: &Path) -> Result<Vec<Complex64>> {
    let rows: Vec<RootRow> = read_rows(path)?;
    let roots: Vec<Complex64> = rows.iter().map(|r| Complex64::new(r.re, r.im)).collect();
    if roots.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Parse(format!("{}: non-finite root", path.display())));
    }
    Ok(roots)
}

pub fn write_roots(path: &Path, roots: &[Complex64]) -> Result<()> {
    let rows: Vec<RootRow> = roots.iter().map(|z| RootRow { re: z.re, im: z.im }).collect();
    write_rows(path, &rows)
}

pub fn write_critical_points(path: &Path, set: &CriticalPointSet) -> Result<()> {
    let rows: Vec<CritRow> = set.points.iter().map(CritRow::from).collect();
    write_rows(path, &rows)
}

pub fn read_critical_points(path: &Path) -> Result<Vec<CritRow>> {
    read_rows(path)
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = File::create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}
