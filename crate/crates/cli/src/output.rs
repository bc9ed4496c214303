use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use mcsh_core::diagnostics::{DiagnosticsRecord, NORM_COLUMNS};

use crate::config::canonical_hash;
use crate::error::CliResult;

/// Fixed leading columns of the diagnostics table.
pub const DIAGNOSTIC_COLUMNS: [&str; 6] = ["t", "energy", "gauss_res", "lorenz_res", "maxwell_res_1", "maxwell_res_2"];

/// Everything needed to repeat a run: the full effective input, its hash, seed and versions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub cli_version: String,
    pub core_version: String,
    pub command: String,
    /// Effective input with defaults filled in.
    pub input: serde_json::Value,
    pub input_sha256: String,
    pub seed: Option<u64>,
    pub threads: usize,
    pub platform: String,
}

impl Manifest {
    pub fn new(command: &str, input: &impl Serialize, seed: Option<u64>) -> Self {
        let input_sha256 = canonical_hash(input);
        let input = serde_json::to_value(input).expect("inputs serialize");
        Self {
            tool: "mcsh".into(),
            cli_version: env!("CARGO_PKG_VERSION").into(),
            core_version: mcsh_core::VERSION.into(),
            command: command.into(),
            input,
            input_sha256,
            seed,
            threads: rayon::current_num_threads(),
            platform: format!("{}-{}", std::env::consts::ARCH, std::env::consts::OS),
        }
    }
}

pub fn write_json(path: &Path, value: &impl Serialize) -> CliResult<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(())
}

/// Writes pretty JSON to `path`, or to stdout when no path is given.
pub fn emit_json(path: Option<&Path>, value: &impl Serialize) -> CliResult<()> {
    match path {
        Some(p) => write_json(p, value),
        None => {
            let mut out = std::io::stdout().lock();
            serde_json::to_writer_pretty(&mut out, value)?;
            out.write_all(b"\n")?;
            Ok(())
        }
    }
}

/// Streams diagnostics rows as CSV; numbers use the shortest round-trip representation.
pub struct DiagnosticsWriter<W: Write> {
    inner: csv::Writer<W>,
    norms: bool,
}

impl<W: Write> DiagnosticsWriter<W> {
    pub fn new(w: W, norms: bool) -> CliResult<Self> {
        let mut inner = csv::Writer::from_writer(w);
        let mut header: Vec<&str> = DIAGNOSTIC_COLUMNS.to_vec();
        if norms {
            header.extend(NORM_COLUMNS);
        }
        inner.write_record(&header)?;
        Ok(Self { inner, norms })
    }

    pub fn row(&mut self, r: &DiagnosticsRecord) -> CliResult<()> {
        let mut cells: Vec<String> = [r.t, r.energy, r.gauss_res, r.lorenz_res, r.maxwell_res_1, r.maxwell_res_2]
            .iter()
            .map(f64::to_string)
            .collect();
        if self.norms {
            cells.extend(r.norms.iter().map(|(_, v)| v.to_string()));
        }
        self.inner.write_record(&cells)?;
        Ok(())
    }

    pub fn finish(mut self) -> CliResult<()> {
        self.inner.flush()?;
        Ok(())
    }
}
