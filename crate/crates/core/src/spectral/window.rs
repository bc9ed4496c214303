use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::field::SpectralField;
use crate::error::{Error, Result};

/// Minimum number of time samples accepted by the windowing routines.
pub const MIN_TIME_SAMPLES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    #[default]
    Hann,
    /// No tapering; only meaningful for exactly periodic-in-time data.
    Rectangular,
}

/// Describes the taper applied to a time series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowInfo {
    pub kind: WindowKind,
    /// Number of times the taper multiplies the data (2 for a product of two windowed fields).
    pub power: u32,
    /// Mean of the squared taper over the samples.
    pub energy_factor: f64,
}

impl WindowKind {
    /// Taper values at `nt` samples. The Hann taper is symmetric with zero endpoints.
    pub fn weights(self, nt: usize) -> Vec<f64> {
        match self {
            WindowKind::Rectangular => vec![1.0; nt],
            WindowKind::Hann => (0..nt).map(|j| 0.5 * (1.0 - (2.0 * PI * j as f64 / (nt - 1) as f64).cos())).collect(),
        }
    }

    pub fn info(self, nt: usize, power: u32) -> WindowInfo {
        let w = self.weights(nt);
        let energy_factor = w.iter().map(|x| x.powi(2 * power as i32)).sum::<f64>() / nt as f64;
        WindowInfo { kind: self, power, energy_factor }
    }
}

/// Multiplies each slice of a time-indexed sequence by the taper.
pub fn window_time(traj: &[SpectralField], kind: WindowKind) -> Result<(Vec<SpectralField>, WindowInfo)> {
    let nt = traj.len();
    if nt < MIN_TIME_SAMPLES {
        return Err(Error::TooFewSamples { needed: MIN_TIME_SAMPLES, got: nt });
    }
    let w = kind.weights(nt);
    let out = traj.iter().zip(&w).map(|(u, &wj)| u.scaled(wj)).collect();
    Ok((out, kind.info(nt, 1)))
}
