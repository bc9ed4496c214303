use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Fourth-order exponential Runge-Kutta (Cox-Matthews).
    #[default]
    Etdrk4,
    /// Symmetric second-order exponential (Lawson) implicit midpoint.
    ExpMidpoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_final: f64,
    pub scheme: Scheme,
    /// Record every `snapshot_stride`-th step (the initial and final states are always recorded).
    pub snapshot_stride: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { dt: 1e-3, t_final: 1.0, scheme: Scheme::Etdrk4, snapshot_stride: 100 }
    }
}

impl IntegratorConfig {
    /// Number of steps; `t_final` must be a positive integer multiple of `dt`.
    pub fn steps(&self) -> Result<usize> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::param("dt", format!("{} must be positive", self.dt)));
        }
        if !(self.t_final >= self.dt * (1.0 - 1e-12) && self.t_final.is_finite()) {
            return Err(Error::param("t_final", format!("{} must be at least dt = {}", self.t_final, self.dt)));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::param("snapshot_stride", "must be at least 1"));
        }
        let steps = (self.t_final / self.dt).round();
        if (steps * self.dt - self.t_final).abs() > 1e-9 * self.t_final.max(self.dt) {
            return Err(Error::param("t_final", format!("{} is not a multiple of dt = {}", self.t_final, self.dt)));
        }
        Ok(steps as usize)
    }
}
