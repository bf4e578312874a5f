//! File formats: distribution CSVs, matrix dumps, pure-state files and the
//! `key=value` config file. Writers go through a temp file and an atomic
//! rename so a failed run never leaves a partial file behind.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::distribution::{PhaseDistribution, PhaseGrid};
use crate::error::{PhaseError, Result};
use crate::fock::{Matrix, StateVector};

pub const CSV_MAGIC: &str = "# phasekit v1";

/// Writes `contents` to `path` via a sibling temp file and rename.
pub fn atomic_write(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| PhaseError::Io(e.error))?;
    Ok(())
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parsed or to-be-written distribution CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    /// Table with a `theta` column followed by one column per distribution.
    pub fn from_distributions(
        meta: Vec<(String, String)>,
        grid: &PhaseGrid,
        columns: &[(&str, &PhaseDistribution)],
    ) -> Self {
        let mut names = vec!["theta".to_string()];
        names.extend(columns.iter().map(|(n, _)| n.to_string()));
        let rows = grid
            .samples()
            .enumerate()
            .map(|(i, t)| {
                let mut row = vec![t];
                row.extend(columns.iter().map(|(_, d)| d.values[i]));
                row
            })
            .collect();
        Self { meta, columns: names, rows }
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_MAGIC);
        out.push('\n');
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}={v}");
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        atomic_write(path, &self.to_csv_string())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, l)) if l.trim_end() == CSV_MAGIC => {}
            _ => return Err(PhaseError::Parse(format!("line 1: expected '{CSV_MAGIC}' header"))),
        }
        let mut meta = Vec::new();
        let mut columns: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for (no, line) in lines {
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let (k, v) = rest
                    .trim()
                    .split_once('=')
                    .ok_or_else(|| PhaseError::Parse(format!("line {}: malformed metadata", no + 1)))?;
                meta.push((k.trim().to_string(), v.trim().to_string()));
                continue;
            }
            match &columns {
                None => columns = Some(line.split(',').map(|s| s.trim().to_string()).collect()),
                Some(cols) => {
                    let row = line
                        .split(',')
                        .map(|s| s.trim().parse::<f64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| PhaseError::Parse(format!("line {}: {e}", no + 1)))?;
                    if row.len() != cols.len() {
                        return Err(PhaseError::Parse(format!(
                            "line {}: expected {} fields, found {}",
                            no + 1,
                            cols.len(),
                            row.len()
                        )));
                    }
                    rows.push(row);
                }
            }
        }
        let columns = columns.ok_or_else(|| PhaseError::Parse("missing column header".into()))?;
        Ok(Self { meta, columns, rows })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }
}

fn parse_cutoff_header(line: Option<&str>) -> Result<usize> {
    let line = line.ok_or_else(|| PhaseError::Parse("empty file".into()))?;
    line.trim()
        .strip_prefix("#cutoff=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| PhaseError::Parse(format!("line 1: expected '#cutoff=N', found '{line}'")))
}

fn parse_fields<const N: usize>(line: &str, no: usize) -> Result<[&str; N]> {
    let parts: Vec<&str> = line.split(',').map(str::trim).collect();
    parts
        .try_into()
        .map_err(|_| PhaseError::Parse(format!("line {}: expected {N} comma-separated fields", no + 1)))
}

fn num<T: std::str::FromStr>(s: &str, no: usize) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e| PhaseError::Parse(format!("line {}: '{s}': {e}", no + 1)))
}

/// `#cutoff=N` header then `j,k,re,im` rows.
pub fn matrix_dump_string(m: &Matrix) -> String {
    let mut out = format!("#cutoff={}\n", m.nrows() - 1);
    for j in 0..m.nrows() {
        for k in 0..m.ncols() {
            let c = m[(j, k)];
            let _ = writeln!(out, "{j},{k},{},{}", fmt_f64(c.re), fmt_f64(c.im));
        }
    }
    out
}

pub fn write_matrix_dump(path: &Path, m: &Matrix) -> Result<()> {
    atomic_write(path, &matrix_dump_string(m))
}

/// Missing entries are zero.
pub fn parse_matrix_dump(text: &str) -> Result<Matrix> {
    let mut lines = text.lines().enumerate();
    let cutoff = parse_cutoff_header(lines.next().map(|(_, l)| l))?;
    let mut m = Matrix::zeros(cutoff + 1, cutoff + 1);
    for (no, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let [j, k, re, im] = parse_fields::<4>(line, no)?;
        let (j, k): (usize, usize) = (num(j, no)?, num(k, no)?);
        if j > cutoff || k > cutoff {
            return Err(PhaseError::Parse(format!("line {}: index beyond cutoff {cutoff}", no + 1)));
        }
        m[(j, k)] = Complex64::new(num(re, no)?, num(im, no)?);
    }
    Ok(m)
}

pub fn read_matrix_dump(path: &Path) -> Result<Matrix> {
    parse_matrix_dump(&fs::read_to_string(path)?)
}

/// `#cutoff=N` header then `index,re,im` rows.
pub fn state_file_string(psi: &StateVector) -> String {
    let mut out = format!("#cutoff={}\n", psi.cutoff());
    for (n, c) in psi.amplitudes().iter().enumerate() {
        let _ = writeln!(out, "{n},{},{}", fmt_f64(c.re), fmt_f64(c.im));
    }
    out
}

pub fn write_state_file(path: &Path, psi: &StateVector) -> Result<()> {
    atomic_write(path, &state_file_string(psi))
}

/// Amplitudes are renormalized; missing indices are zero.
pub fn parse_state_file(text: &str) -> Result<StateVector> {
    let mut lines = text.lines().enumerate();
    let cutoff = parse_cutoff_header(lines.next().map(|(_, l)| l))?;
    let mut amps = vec![Complex64::new(0.0, 0.0); cutoff + 1];
    for (no, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let [n, re, im] = parse_fields::<3>(line, no)?;
        let n: usize = num(n, no)?;
        if n > cutoff {
            return Err(PhaseError::Parse(format!("line {}: index {n} beyond cutoff {cutoff}", no + 1)));
        }
        amps[n] = Complex64::new(num(re, no)?, num(im, no)?);
    }
    StateVector::from_amplitudes(amps)
}

pub fn read_state_file(path: &Path) -> Result<StateVector> {
    parse_state_file(&fs::read_to_string(path)?)
}

/// `key=value` lines; blank lines and `#` comments ignored.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(no, l)| {
            l.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| PhaseError::Parse(format!("config line {}: expected key=value", no + 1)))
        })
        .collect()
}
