use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform periodic grid on the torus `[0, period)^2` with `n` points per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    n: usize,
    period: f64,
}

impl Grid2D {
    /// Default torus period, chosen so that `dk = 1/8`.
    pub const DEFAULT_PERIOD: f64 = 16.0 * PI;

    pub fn new(n: usize, period: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::Grid(format!("n = {n} must be a power of two >= 8")));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::Grid(format!("period = {period} must be positive and finite")));
        }
        Ok(Self { n, period })
    }

    pub fn with_default_period(n: usize) -> Result<Self> {
        Self::new(n, Self::DEFAULT_PERIOD)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Number of grid points, `n * n`.
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Physical spacing `h = period / n`.
    pub fn spacing(&self) -> f64 {
        self.period / self.n as f64
    }

    /// Frequency lattice spacing `2 pi / period`.
    pub fn dk(&self) -> f64 {
        2.0 * PI / self.period
    }

    /// Integer wavenumber of FFT index `i`; the Nyquist index maps to `-n/2`.
    pub fn wavenumber(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    pub fn is_nyquist(&self, i: usize) -> bool {
        i == self.n / 2
    }

    /// Angular frequency of FFT index `i`.
    pub fn xi(&self, i: usize) -> f64 {
        self.dk() * self.wavenumber(i) as f64
    }

    /// Angular frequencies of all FFT indices along one axis.
    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.xi(i)).collect()
    }

    /// Coordinate of grid index `i` along one axis.
    pub fn coord(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    /// FFT index of the integer wavenumber `k`, if it lies on the lattice.
    pub fn index_of(&self, k: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if k < -half || k >= half {
            None
        } else if k >= 0 {
            Some(k as usize)
        } else {
            Some((self.n as i64 + k) as usize)
        }
    }

    /// Flat index of the mode `(k1, k2)`.
    pub fn mode_index(&self, k1: i64, k2: i64) -> Option<usize> {
        Some(self.index_of(k1)? * self.n + self.index_of(k2)?)
    }

    pub fn with_period(&self, period: f64) -> Result<Self> {
        Self::new(self.n, period)
    }

    pub(crate) fn check_same(&self, other: &Grid2D) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(format!(
                "n = {}, P = {} vs n = {}, P = {}",
                self.n, self.period, other.n, other.period
            )));
        }
        Ok(())
    }
}

/// `<x> = sqrt(1 + x^2)`.
pub fn japanese(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

/// `<xi> = sqrt(1 + |xi|^2)` for a planar frequency.
pub fn japanese2(x1: f64, x2: f64) -> f64 {
    (1.0 + x1 * x1 + x2 * x2).sqrt()
}
