use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coupling constants: charge `e`, Chern-Simons coefficient `kappa`, vacuum scale `v`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysParams {
    pub e: f64,
    pub kappa: f64,
    pub v: f64,
}

impl PhysParams {
    pub fn new(e: f64, kappa: f64, v: f64) -> Result<Self> {
        for (name, x) in [("e", e), ("kappa", kappa), ("v", v)] {
            if !x.is_finite() {
                return Err(Error::param(name, "must be finite"));
            }
        }
        if kappa <= 0.0 {
            return Err(Error::param("kappa", format!("{kappa} must be positive")));
        }
        Ok(Self { e, kappa, v })
    }

    /// Constant `e v^2 / kappa` relating the shifted neutral field to the physical one.
    /// Zero whenever `e v = 0`, so degenerate `kappa = 0` settings stay usable for `e = 0`.
    pub fn shift(&self) -> f64 {
        if self.e * self.v == 0.0 {
            0.0
        } else {
            self.e * self.v * self.v / self.kappa
        }
    }
}

impl Default for PhysParams {
    fn default() -> Self {
        Self { e: 1.0, kappa: 1.0, v: 1.0 }
    }
}
