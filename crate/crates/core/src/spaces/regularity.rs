use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lebesgue exponent and regularity indices of the data spaces.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularityParams {
    pub r: f64,
    /// Regularity of the charged scalar.
    pub s: f64,
    /// Regularity of the gauge potential.
    pub l: f64,
    /// Regularity of the neutral scalar.
    pub m: f64,
    /// Modulation exponent of the solution spaces.
    pub b: f64,
    pub eps: f64,
}

impl RegularityParams {
    /// Builds parameters with `b = 1/r + eps`.
    pub fn new(r: f64, s: f64, l: f64, m: f64, eps: f64) -> Result<Self> {
        let p = Self { r, s, l, m, b: 1.0 / r + eps, eps };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_r(self.r)?;
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::param("eps", "must be positive"));
        }
        for (name, x) in [("s", self.s), ("l", self.l), ("m", self.m), ("b", self.b)] {
            if !x.is_finite() {
                return Err(Error::param(name, "must be finite"));
            }
        }
        Ok(())
    }
}

impl Default for RegularityParams {
    fn default() -> Self {
        Self { r: 2.0, s: 1.0, l: 1.0, m: 1.0, b: 0.51, eps: 0.01 }
    }
}

/// Validates `1 < r <= 2` and returns the dual exponent `r' = r / (r - 1)`.
pub fn check_r(r: f64) -> Result<f64> {
    if !(r > 1.0 && r <= 2.0) {
        return Err(Error::param("r", format!("{r} must satisfy 1 < r <= 2")));
    }
    Ok(r / (r - 1.0))
}

/// `(sum_k |x_k|^p * measure)^{1/p}`, scaled by the maximum to avoid overflow for large `p`.
pub(crate) fn lp_sum(values: impl Iterator<Item = f64> + Clone, p: f64, measure: f64) -> f64 {
    let mx = values.clone().fold(0.0, f64::max);
    if mx == 0.0 {
        return 0.0;
    }
    let s: f64 = values.map(|x| (x / mx).powf(p)).sum();
    mx * (s * measure).powf(1.0 / p)
}
