use num_complex::Complex64;

use super::fft::{fft2, Direction};
use super::field::{Basis, SpectralField};
use crate::error::{Error, Result};

/// Even padded grid size that resolves products of `degree` band-limited factors exactly.
///
/// With band `|k| <= n/2 - 1` per axis, aliasing is avoided when `m > (degree + 1)(n/2 - 1)`,
/// which gives `3n/2` for quadratic and `2n` for cubic terms.
pub fn padded_size(n: usize, degree: usize) -> usize {
    if degree <= 1 {
        return n;
    }
    let m = ((degree + 1) * n).div_ceil(2);
    m + (m % 2)
}

/// Zero-padding between an `n x n` coefficient array and an `m x m` physical grid.
#[derive(Clone, Debug)]
pub(crate) struct Padder {
    n: usize,
    m: usize,
    map: Vec<Option<usize>>,
}

impl Padder {
    pub(crate) fn new(n: usize, m: usize) -> Self {
        assert!(m >= n);
        let map = (0..n)
            .map(|i| {
                if i == n / 2 {
                    None
                } else if i < n / 2 {
                    Some(i)
                } else {
                    Some(m + i - n)
                }
            })
            .collect();
        Self { n, m, map }
    }

    pub(crate) fn m(&self) -> usize {
        self.m
    }

    /// Samples the band-limited function with unitary coefficients `src` on the padded grid.
    pub(crate) fn pad_into(&self, src: &[Complex64], dst: &mut [Complex64]) {
        let (n, m) = (self.n, self.m);
        dst.fill(Complex64::new(0.0, 0.0));
        for i in 0..n {
            let Some(pi) = self.map[i] else { continue };
            for j in 0..n {
                let Some(pj) = self.map[j] else { continue };
                dst[pi * m + pj] = src[i * n + j];
            }
        }
        fft2(dst, m, Direction::Inverse, 1.0 / n as f64);
    }

    /// Projects padded-grid values onto the band, returning unitary `n`-grid coefficients.
    /// `src` is overwritten.
    pub(crate) fn unpad(&self, src: &mut [Complex64], dst: &mut [Complex64]) {
        let (n, m) = (self.n, self.m);
        fft2(src, m, Direction::Forward, 1.0);
        let s = n as f64 / (m * m) as f64;
        dst.fill(Complex64::new(0.0, 0.0));
        for i in 0..n {
            let Some(pi) = self.map[i] else { continue };
            for j in 0..n {
                let Some(pj) = self.map[j] else { continue };
                dst[i * n + j] = src[pi * m + pj] * s;
            }
        }
    }
}

/// Product of `factors`, computed on a grid padded for `degree`-fold products and
/// truncated to the band (Nyquist excluded). Returned in the frequency basis.
pub fn dealias_product(factors: &[&SpectralField], degree: usize) -> Result<SpectralField> {
    let first = factors.first().ok_or_else(|| Error::param("factors", "at least one factor required"))?;
    if degree < factors.len() {
        return Err(Error::param("degree", format!("{degree} is below the number of factors {}", factors.len())));
    }
    let grid = first.grid();
    for f in factors {
        grid.check_same(&f.grid())?;
    }
    let n = grid.n();
    let pad = Padder::new(n, padded_size(n, degree));
    let mm = pad.m() * pad.m();
    let mut acc = vec![Complex64::new(1.0, 0.0); mm];
    let mut buf = vec![Complex64::new(0.0, 0.0); mm];
    for f in factors {
        let fh = f.to_frequency();
        pad.pad_into(fh.data(), &mut buf);
        for (a, b) in acc.iter_mut().zip(&buf) {
            *a *= b;
        }
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    pad.unpad(&mut acc, &mut out);
    SpectralField::from_data(grid, Basis::Frequency, out)
}
