use serde::Serialize;

use super::regularity::{check_r, lp_sum};
use crate::error::{Error, Result};
use crate::spectral::{japanese2, Grid2D, SpectralField};

/// Continuum transform `int u e^{-i x.xi} dx` at the lattice, from unitary coefficients.
fn continuum_factor(g: &Grid2D) -> f64 {
    g.period() * g.period() / g.n() as f64
}

fn weighted_norm(u: &SpectralField, r: f64, weight: impl Fn(f64, f64) -> Option<f64>) -> Result<f64> {
    let rp = check_r(r)?;
    let g = u.grid();
    let f = u.to_frequency();
    let n = g.n();
    let xi = g.frequencies();
    let cf = continuum_factor(&g);
    let vals = (0..n * n).filter_map(|k| weight(xi[k / n], xi[k % n]).map(|w| w * f.data()[k].norm() * cf));
    let dk = g.dk();
    Ok(lp_sum(vals, rp, dk * dk))
}

/// Fourier-Lebesgue norm `|| <xi>^s u^ ||_{L^{r'}}` by lattice quadrature with measure `dk^2`.
pub fn fl_norm(u: &SpectralField, s: f64, r: f64) -> Result<f64> {
    weighted_norm(u, r, |a, b| Some(japanese2(a, b).powf(s)))
}

/// Homogeneous variant with weight `|xi|^s`; the zero mode is excluded.
pub fn fl_norm_homogeneous(u: &SpectralField, s: f64, r: f64) -> Result<f64> {
    weighted_norm(u, r, |a, b| {
        let k = (a * a + b * b).sqrt();
        (k > 0.0).then(|| k.powf(s))
    })
}

/// Result of comparing a dilated field's homogeneous norm with the scaling law.
#[derive(Clone, Debug, Serialize)]
pub struct ScalingReport {
    pub lambda: f64,
    pub s: f64,
    pub r: f64,
    /// `1 + s - 2/r`.
    pub exponent: f64,
    pub norm: f64,
    pub norm_dilated: f64,
    /// `norm_dilated / (lambda^exponent * norm)`; equals 1 when the law holds.
    pub ratio: f64,
    /// Fraction of spectral energy in the outer eighth of the band.
    pub edge_fraction: f64,
}

/// Largest edge-energy fraction tolerated before the input counts as under-resolved.
pub const EDGE_FRACTION_LIMIT: f64 = 1e-8;

/// Checks `|| lambda u0(lambda .) ||_{dot H^{s,r}} = lambda^{1+s-2/r} || u0 ||` on the lattice.
///
/// The dilated field is represented on a torus of period `P / lambda` with the same samples
/// times `lambda`, so the dilation is exact coefficient-wise.
pub fn scaling_check(u0: &SpectralField, lambda: f64, s: f64, r: f64) -> Result<ScalingReport> {
    check_r(r)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::param("lambda", "must be positive"));
    }
    let g = u0.grid();
    let edge_fraction = edge_fraction(u0);
    if edge_fraction > EDGE_FRACTION_LIMIT {
        return Err(Error::Resolution(format!("{edge_fraction:.3e} of the spectral energy lies near the band edge")));
    }
    let dilated_grid = g.with_period(g.period() / lambda)?;
    let phys = u0.to_physical();
    let dilated = SpectralField::from_data(dilated_grid, phys.basis(), phys.scaled(lambda).into_data())?;
    let norm = fl_norm_homogeneous(u0, s, r)?;
    let norm_dilated = fl_norm_homogeneous(&dilated, s, r)?;
    let exponent = 1.0 + s - 2.0 / r;
    Ok(ScalingReport {
        lambda,
        s,
        r,
        exponent,
        norm,
        norm_dilated,
        ratio: norm_dilated / (lambda.powf(exponent) * norm),
        edge_fraction,
    })
}

/// Share of `sum |u_k|^2` carried by modes with `max(|k1|, |k2|) > 3n/8`.
pub fn edge_fraction(u: &SpectralField) -> f64 {
    let g = u.grid();
    let f = u.to_frequency();
    let n = g.n();
    let cut = (3 * n / 8) as i64;
    let (mut edge, mut total) = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let e = f.data()[i * n + j].norm_sqr();
            total += e;
            if g.wavenumber(i).abs().max(g.wavenumber(j).abs()) > cut {
                edge += e;
            }
        }
    }
    if total == 0.0 {
        0.0
    } else {
        edge / total
    }
}
