//! Snapshot files: one JSON header line, then the raw little-endian `f64` arrays it lists.
//!
//! Every array is a physical-basis field of shape `[n, n, 2]`, row-major over `(x1, x2)` with
//! the last axis holding real and imaginary parts. Values come first, then time derivatives.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use mcsh_core::model::{Component, FieldState};
use mcsh_core::spectral::{Basis, Grid2D, SpectralField};

use crate::error::{CliError, CliResult};

pub const FORMAT: &str = "mcsh-snapshot";
pub const DTYPE: &str = "f64-le";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrayInfo {
    pub name: String,
    pub shape: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotHeader {
    pub format: String,
    pub version: u32,
    pub grid: GridInfo,
    pub t: f64,
    pub step: usize,
    pub dtype: String,
    pub layout: String,
    pub fields: Vec<ArrayInfo>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub n: usize,
    pub period: f64,
}

fn array_names() -> Vec<String> {
    let values = Component::ALL.iter().map(|c| c.name().to_string());
    let rates = Component::ALL.iter().map(|c| format!("dt_{}", c.name()));
    values.chain(rates).collect()
}

pub fn write_snapshot(path: &Path, state: &FieldState, step: usize) -> CliResult<()> {
    let g = state.grid();
    let n = g.n();
    let header = SnapshotHeader {
        format: FORMAT.into(),
        version: 1,
        grid: GridInfo { n, period: g.period() },
        t: state.t,
        step,
        dtype: DTYPE.into(),
        layout: "row-major".into(),
        fields: array_names().into_iter().map(|name| ArrayInfo { name, shape: [n, n, 2] }).collect(),
    };
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    serde_json::to_writer(&mut out, &header)?;
    out.write_all(b"\n")?;
    let phys = state.to_physical();
    for f in phys.values.iter().chain(&phys.rates) {
        for z in f.data() {
            out.write_all(&z.re.to_le_bytes())?;
            out.write_all(&z.im.to_le_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> CliResult<(SnapshotHeader, FieldState)> {
    let bad = |m: &str| CliError::Validation(format!("{}: {m}", path.display()));
    let mut r =
        BufReader::new(std::fs::File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?);
    let mut line = Vec::new();
    r.read_until(b'\n', &mut line)?;
    let header: SnapshotHeader = serde_json::from_slice(&line).map_err(|e| bad(&format!("bad header: {e}")))?;
    if header.format != FORMAT || header.dtype != DTYPE || header.layout != "row-major" {
        return Err(bad("unsupported format, dtype or layout"));
    }
    let grid = Grid2D::new(header.grid.n, header.grid.period)?;
    let n = grid.n();
    let names: Vec<&str> = header.fields.iter().map(|f| f.name.as_str()).collect();
    if names != array_names() || header.fields.iter().any(|f| f.shape != [n, n, 2]) {
        return Err(bad("unexpected field list"));
    }
    let mut buf = vec![0u8; 16 * n * n];
    let mut fields = Vec::with_capacity(10);
    for _ in 0..10 {
        r.read_exact(&mut buf).map_err(|_| bad("truncated data"))?;
        let data = buf
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().unwrap());
                let im = f64::from_le_bytes(c[8..].try_into().unwrap());
                Complex64::new(re, im)
            })
            .collect();
        fields.push(SpectralField::from_data(grid, Basis::Physical, data)?);
    }
    if r.read(&mut [0u8; 1])? != 0 {
        return Err(bad("trailing bytes after the last array"));
    }
    let rates: [SpectralField; 5] = fields.split_off(5).try_into().unwrap();
    let values: [SpectralField; 5] = fields.try_into().unwrap();
    Ok((header.clone(), FieldState::new(values, rates, header.t)?))
}
