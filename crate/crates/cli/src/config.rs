use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use mcsh_core::datagen::DataSpec;
use mcsh_core::evolve::{IntegratorConfig, Scheme};
use mcsh_core::model::PhysParams;
use mcsh_core::spaces::RegularityParams;
use mcsh_core::spectral::Grid2D;

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub n: usize,
    pub period: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { n: 64, period: Grid2D::DEFAULT_PERIOD }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorSection {
    pub dt: f64,
    /// Final time; `t_final` is accepted as a spelled-out alias.
    #[serde(rename = "T", alias = "t_final")]
    pub t_final: f64,
    pub scheme: Scheme,
    pub snapshot_stride: usize,
}

impl Default for IntegratorSection {
    fn default() -> Self {
        let c = IntegratorConfig::default();
        Self { dt: c.dt, t_final: c.t_final, scheme: c.scheme, snapshot_stride: c.snapshot_stride }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsSection {
    pub e: f64,
    pub kappa: f64,
    pub v: f64,
}

impl Default for ParamsSection {
    fn default() -> Self {
        let p = PhysParams::default();
        Self { e: p.e, kappa: p.kappa, v: p.v }
    }
}

/// Regularity indices; `b` defaults to `1/r + eps`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RegularitySection {
    pub r: f64,
    pub s: f64,
    pub l: f64,
    pub m: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    pub eps: f64,
}

impl Default for RegularitySection {
    fn default() -> Self {
        let d = RegularityParams::default();
        Self { r: d.r, s: d.s, l: d.l, m: d.m, b: None, eps: d.eps }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    /// Directory receiving every output of the run; relative paths resolve against the config file.
    pub dir: PathBuf,
    /// Write one binary file per snapshot under `dir/snapshots`.
    pub snapshots: bool,
    pub diagnostics: String,
    pub manifest: String,
    /// Append the Fourier-Lebesgue norm columns to the diagnostics table.
    pub norms: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("run"),
            snapshots: true,
            diagnostics: "diagnostics.csv".into(),
            manifest: "manifest.json".into(),
            norms: false,
        }
    }
}

/// Complete description of a simulation run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub grid: GridSection,
    pub integrator: IntegratorSection,
    pub params: ParamsSection,
    pub regularity: RegularitySection,
    pub data: DataSpec,
    pub output: OutputSection,
}

impl RunConfig {
    /// Checks every numeric range; errors name the offending field.
    pub fn validate(&self) -> CliResult<()> {
        self.grid()?;
        self.integrator().steps().map_err(|e| field_error("integrator", e))?;
        self.params()?;
        self.regularity()?;
        match self.data {
            DataSpec::GaussianBump { amp, width } if !(width > 0.0 && width.is_finite() && amp.is_finite()) => {
                Err(CliError::Validation("data.width: must be positive and amp finite".into()))
            }
            DataSpec::RandomBand { amp, k_min, k_max, .. } if !(amp.is_finite() && k_min >= 0.0 && k_max >= k_min) => {
                Err(CliError::Validation("data: need finite amp and 0 <= k_min <= k_max".into()))
            }
            _ => Ok(()),
        }?;
        if self.output.diagnostics.is_empty() || self.output.manifest.is_empty() {
            return Err(CliError::Validation("output: file names must be nonempty".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> CliResult<Grid2D> {
        Grid2D::new(self.grid.n, self.grid.period).map_err(|e| field_error("grid", e))
    }

    pub fn integrator(&self) -> IntegratorConfig {
        let i = &self.integrator;
        IntegratorConfig { dt: i.dt, t_final: i.t_final, scheme: i.scheme, snapshot_stride: i.snapshot_stride }
    }

    pub fn params(&self) -> CliResult<PhysParams> {
        let p = &self.params;
        PhysParams::new(p.e, p.kappa, p.v).map_err(|e| field_error("params", e))
    }

    pub fn regularity(&self) -> CliResult<RegularityParams> {
        let g = &self.regularity;
        let mut reg = RegularityParams::new(g.r, g.s, g.l, g.m, g.eps).map_err(|e| field_error("regularity", e))?;
        if let Some(b) = g.b {
            reg.b = b;
            reg.validate().map_err(|e| field_error("regularity", e))?;
        }
        Ok(reg)
    }

    /// Seed of the data generator, if it draws random numbers.
    pub fn seed(&self) -> Option<u64> {
        match self.data {
            DataSpec::RandomBand { seed, .. } => Some(seed),
            _ => None,
        }
    }

    /// Canonical hash of the config with defaults filled in.
    pub fn hash(&self) -> String {
        canonical_hash(self)
    }
}

fn field_error(section: &str, e: mcsh_core::Error) -> CliError {
    CliError::Validation(format!("{section}: {e}"))
}

/// SHA-256 of the compact JSON form with object keys sorted.
pub fn canonical_hash(value: &impl Serialize) -> String {
    // going through `Value` sorts the keys
    let v = serde_json::to_value(value).expect("inputs serialize");
    let text = serde_json::to_string(&v).expect("value serializes");
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Reads and validates a config; relative output directories resolve against the file's directory.
pub fn load_config(path: &Path) -> CliResult<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut cfg = parse_config(&text).map_err(|e| match e {
        CliError::Validation(m) => CliError::Validation(format!("{}: {m}", path.display())),
        other => other,
    })?;
    if cfg.output.dir.is_relative() {
        if let Some(parent) = path.parent() {
            cfg.output.dir = parent.join(&cfg.output.dir);
        }
    }
    Ok(cfg)
}

/// Parses a JSON config; serde errors carry line and column.
pub fn parse_config(text: &str) -> CliResult<RunConfig> {
    let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Validation(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}
