use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fft::{fft2_unitary, Direction};
use super::grid::Grid2D;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Physical,
    Frequency,
}

/// Complex field on a [`Grid2D`], stored row-major (`data[i1 * n + i2]`) in one basis.
///
/// Frequency coefficients use the unitary DFT, so a constant field `c` has zero mode `c * n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: Grid2D,
    basis: Basis,
    data: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl SpectralField {
    pub fn zeros(grid: Grid2D, basis: Basis) -> Self {
        Self { grid, basis, data: vec![ZERO; grid.len()] }
    }

    pub fn from_data(grid: Grid2D, basis: Basis, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::GridMismatch(format!("{} values for a grid of {}", data.len(), grid.len())));
        }
        Ok(Self { grid, basis, data })
    }

    /// Samples `f(x1, x2)` at the grid points.
    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let n = grid.n();
        let mut data = Vec::with_capacity(grid.len());
        for i in 0..n {
            for j in 0..n {
                data.push(f(grid.coord(i), grid.coord(j)));
            }
        }
        Self { grid, basis: Basis::Physical, data }
    }

    pub fn from_real_fn(grid: Grid2D, f: impl Fn(f64, f64) -> f64) -> Self {
        Self::from_fn(grid, |x, y| Complex64::new(f(x, y), 0.0))
    }

    pub fn grid(&self) -> Grid2D {
        self.grid
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn into_frequency(mut self) -> Self {
        if self.basis == Basis::Physical {
            fft2_unitary(&mut self.data, self.grid.n(), Direction::Forward);
            self.basis = Basis::Frequency;
        }
        self
    }

    pub fn into_physical(mut self) -> Self {
        if self.basis == Basis::Frequency {
            fft2_unitary(&mut self.data, self.grid.n(), Direction::Inverse);
            self.basis = Basis::Physical;
        }
        self
    }

    pub fn to_frequency(&self) -> Self {
        self.clone().into_frequency()
    }

    pub fn to_physical(&self) -> Self {
        self.clone().into_physical()
    }

    pub fn into_basis(self, basis: Basis) -> Self {
        match basis {
            Basis::Physical => self.into_physical(),
            Basis::Frequency => self.into_frequency(),
        }
    }

    /// Discrete L2 norm `sqrt(h^2 sum |u|^2)`; identical in both bases.
    pub fn l2_norm(&self) -> f64 {
        let h = self.grid.spacing();
        (self.data.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt() * h
    }

    /// Largest absolute value of the stored coefficients.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Spatial mean of the field.
    pub fn mean(&self) -> Complex64 {
        let n = self.grid.n() as f64;
        match self.basis {
            Basis::Frequency => self.data[0] / n,
            Basis::Physical => self.data.iter().sum::<Complex64>() / (n * n),
        }
    }

    /// Pointwise complex conjugate, in the current basis.
    pub fn conj(&self) -> Self {
        match self.basis {
            Basis::Physical => {
                Self { grid: self.grid, basis: self.basis, data: self.data.iter().map(|z| z.conj()).collect() }
            }
            Basis::Frequency => {
                let n = self.grid.n();
                let mut data = vec![ZERO; n * n];
                for i in 0..n {
                    let ri = (n - i) % n;
                    for j in 0..n {
                        data[i * n + j] = self.data[ri * n + (n - j) % n].conj();
                    }
                }
                Self { grid: self.grid, basis: self.basis, data }
            }
        }
    }

    /// Real part of the represented function.
    pub fn real_part(&self) -> Self {
        let c = self.conj();
        let mut out = self.clone();
        for (z, w) in out.data.iter_mut().zip(&c.data) {
            *z = 0.5 * (*z + w);
        }
        out
    }

    /// Imaginary part of the represented function.
    pub fn imag_part(&self) -> Self {
        let c = self.conj();
        let mut out = self.clone();
        for (z, w) in out.data.iter_mut().zip(&c.data) {
            *z = (*z - w) * Complex64::new(0.0, -0.5);
        }
        out
    }

    /// Size of the imaginary part relative to the field (0 for an exactly real field).
    pub fn realness_defect(&self) -> f64 {
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        self.imag_part().max_abs() / scale
    }

    /// Copy with the Nyquist row and column removed (frequency basis).
    pub fn without_nyquist(&self) -> Self {
        let mut f = self.to_frequency();
        super::multiplier::zero_nyquist(&mut f.data, f.grid.n());
        f.into_basis(self.basis)
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.scaled_complex(Complex64::new(c, 0.0))
    }

    pub fn scaled_complex(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|z| *z *= c);
        out
    }

    fn aligned(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(other.clone().into_basis(self.basis))
    }

    /// `self + a * other`, in the basis of `self`.
    pub fn axpy(&self, a: f64, other: &Self) -> Result<Self> {
        let o = self.aligned(other)?;
        let mut out = self.clone();
        for (z, w) in out.data.iter_mut().zip(&o.data) {
            *z += a * w;
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(-1.0, other)
    }

    /// Pointwise product on the grid, without dealiasing.
    pub fn mul_pointwise(&self, other: &Self) -> Result<Self> {
        let a = self.to_physical();
        let b = a.aligned(other)?;
        let data = a.data.iter().zip(&b.data).map(|(x, y)| x * y).collect();
        Ok(Self { grid: self.grid, basis: Basis::Physical, data })
    }

    /// Discrete L2 distance between two fields on the same grid.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.l2_norm())
    }
}

/// Unitary forward transform; the input must be in the physical basis.
pub fn fft_forward(u: &SpectralField) -> Result<SpectralField> {
    if u.basis != Basis::Physical {
        return Err(Error::Basis("forward transform expects a physical-basis field".into()));
    }
    Ok(u.to_frequency())
}

/// Unitary inverse transform; the input must be in the frequency basis.
pub fn fft_inverse(u: &SpectralField) -> Result<SpectralField> {
    if u.basis != Basis::Frequency {
        return Err(Error::Basis("inverse transform expects a frequency-basis field".into()));
    }
    Ok(u.to_physical())
}
