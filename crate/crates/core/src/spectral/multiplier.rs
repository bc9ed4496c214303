use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::field::{Basis, SpectralField};
use super::grid::{japanese2, Grid2D};
use crate::error::{Error, Result};

type Symbol = dyn Fn(f64, f64) -> Complex64 + Send + Sync;

/// Fourier multiplier `m(D)` given by its symbol `m(xi1, xi2)`.
#[derive(Clone)]
pub struct Multiplier {
    name: String,
    symbol: Arc<Symbol>,
}

impl fmt::Debug for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Multiplier").field("name", &self.name).finish()
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl Multiplier {
    pub fn new(name: impl Into<String>, symbol: impl Fn(f64, f64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self { name: name.into(), symbol: Arc::new(symbol) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, xi1: f64, xi2: f64) -> Complex64 {
        (self.symbol)(xi1, xi2)
    }

    pub fn identity() -> Self {
        Self::new("id", |_, _| c(1.0))
    }

    /// `<nabla>^alpha`.
    pub fn japanese(alpha: f64) -> Self {
        Self::new(format!("<D>^{alpha}"), move |a, b| c(japanese2(a, b).powf(alpha)))
    }

    /// `|nabla|^alpha`; for `alpha < 0` the zero mode is set to 0.
    pub fn abs_power(alpha: f64) -> Self {
        Self::new(format!("|D|^{alpha}"), move |a, b| {
            let r = (a * a + b * b).sqrt();
            if r == 0.0 {
                c(if alpha == 0.0 { 1.0 } else { 0.0 })
            } else {
                c(r.powf(alpha))
            }
        })
    }

    /// `|nabla|^{-1}` with zero mode 0.
    pub fn inverse_abs() -> Self {
        Self::abs_power(-1.0)
    }

    /// `d_j` with symbol `i xi_j`, `j` in `{1, 2}`.
    pub fn partial(j: usize) -> Self {
        assert!(j == 1 || j == 2, "spatial index must be 1 or 2");
        Self::new(format!("d{j}"), move |a, b| Complex64::new(0.0, if j == 1 { a } else { b }))
    }

    /// Riesz-type transform `R_j = d_j <nabla>^{-1}`.
    pub fn riesz(j: usize) -> Self {
        assert!(j == 1 || j == 2, "spatial index must be 1 or 2");
        Self::new(format!("R{j}"), move |a, b| Complex64::new(0.0, if j == 1 { a } else { b } / japanese2(a, b)))
    }

    /// Laplacian `d1^2 + d2^2`.
    pub fn laplacian() -> Self {
        Self::new("Delta", |a, b| c(-(a * a + b * b)))
    }

    /// Symbol product, i.e. composition of the two operators.
    pub fn then(&self, other: &Multiplier) -> Self {
        let (f, g) = (self.symbol.clone(), other.symbol.clone());
        Self::new(format!("{}*{}", other.name, self.name), move |a, b| f(a, b) * g(a, b))
    }

    /// Symbol values on the lattice of `grid`, Nyquist row and column set to zero.
    pub fn table(&self, grid: &Grid2D) -> Result<Vec<Complex64>> {
        let n = grid.n();
        let xi = grid.frequencies();
        let mut out = vec![c(0.0); n * n];
        for i in 0..n {
            if grid.is_nyquist(i) {
                continue;
            }
            for j in 0..n {
                if grid.is_nyquist(j) {
                    continue;
                }
                let v = self.eval(xi[i], xi[j]);
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::Config(format!(
                        "symbol {} is not finite at xi = ({}, {})",
                        self.name, xi[i], xi[j]
                    )));
                }
                out[i * n + j] = v;
            }
        }
        Ok(out)
    }
}

pub(crate) fn zero_nyquist(data: &mut [Complex64], n: usize) {
    let h = n / 2;
    for k in 0..n {
        data[h * n + k] = c(0.0);
        data[k * n + h] = c(0.0);
    }
}

/// Applies `m(D)` to `u` and returns the result in basis `out`.
///
/// The Nyquist row and column are zeroed.
pub fn apply_multiplier(u: &SpectralField, m: &Multiplier, out: Basis) -> Result<SpectralField> {
    let table = m.table(&u.grid())?;
    let mut f = u.to_frequency();
    for (z, s) in f.data_mut().iter_mut().zip(&table) {
        *z *= s;
    }
    Ok(f.into_basis(out))
}
