//! Conservation and constraint monitors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::pointwise::{im_xcy, padded_eval, padded_integral};
use crate::model::{curvature, derivative, rhs_second_order, FieldState, PhysParams};
use crate::spaces::{fl_norm, RegularityParams};
use crate::spectral::{padded_size, SpectralField};

/// One row of the diagnostics time series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub energy: f64,
    pub gauss_res: f64,
    pub lorenz_res: f64,
    pub maxwell_res_1: f64,
    pub maxwell_res_2: f64,
    /// Selected Fourier-Lebesgue norms, in a fixed order.
    pub norms: Vec<(String, f64)>,
}

/// Lorenz residual `d_t A0 - d1 A1 - d2 A2`.
pub fn lorenz_residual(state: &FieldState) -> SpectralField {
    let s = state.to_frequency();
    s.da(0).sub(&derivative(s.a(1), 1)).unwrap().sub(&derivative(s.a(2), 2)).unwrap()
}

/// Gauss-law residual `-Delta A0 + d_t(div A) + kappa F12 + 2e Im(phi conj D_0 phi)`.
pub fn gauss_residual(state: &FieldState, params: &PhysParams) -> Result<SpectralField> {
    let s = state.to_frequency();
    let grid = s.grid();
    let e = params.e;
    let curv = curvature(&s);
    let lap = derivative(&derivative(s.a(0), 1), 1).add(&derivative(&derivative(s.a(0), 2), 2))?;
    let charge = padded_eval(&grid, padded_size(grid.n(), 3), [s.a(0).data(), s.phi().data(), s.dphi().data()], |x| {
        let (a0, p, pt) = (x[0].re, x[1], x[2]);
        Complex64::new(2.0 * e * (im_xcy(p, pt) + e * a0 * p.norm_sqr()), 0.0)
    });
    let mut out = derivative(s.da(1), 1).add(&derivative(s.da(2), 2))?.sub(&lap)?.axpy(params.kappa, &curv.f12)?;
    for (o, c) in out.data_mut().iter_mut().zip(&charge) {
        *o += c;
    }
    Ok(out)
}

/// Residuals of the two spatial Maxwell equations, with `d_t^2 A_j` taken from the evolution law.
///
/// `(d_t^2 - d2^2) A1 - d1(d_t A0 - d2 A2) + kappa F02 + 2e Im(phi conj D_1 phi)` and
/// `(d_t^2 - d1^2) A2 - d2(d_t A0 - d1 A1) - kappa F01 + 2e Im(phi conj D_2 phi)`.
pub fn maxwell_residuals(state: &FieldState, params: &PhysParams) -> Result<[SpectralField; 2]> {
    let s = state.to_frequency();
    let grid = s.grid();
    let e = params.e;
    let f = rhs_second_order(&s, params)?;
    let curv = curvature(&s);
    let d = |u: &SpectralField, a: usize| derivative(u, a);
    let mut out = Vec::with_capacity(2);
    for j in 1..=2usize {
        let o = 3 - j;
        // d_t^2 A_j = Delta A_j - A_j + F_j
        let att = d(&d(s.a(j), 1), 1).add(&d(&d(s.a(j), 2), 2))?.sub(s.a(j))?.add(&f[j])?;
        let transverse = att.sub(&d(&d(s.a(j), o), o))?;
        let mixed = d(&s.da(0).sub(&d(s.a(o), o))?, j);
        let cs = if j == 1 { curv.f02.scaled(params.kappa) } else { curv.f01.scaled(-params.kappa) };
        let dphi = d(s.phi(), j);
        let current = padded_eval(&grid, padded_size(grid.n(), 3), [s.a(j).data(), s.phi().data(), dphi.data()], |x| {
            let (a, p, pj) = (x[0].re, x[1], x[2]);
            Complex64::new(2.0 * e * (im_xcy(p, pj) + e * a * p.norm_sqr()), 0.0)
        });
        let mut r = transverse.sub(&mixed)?.add(&cs)?;
        for (z, c) in r.data_mut().iter_mut().zip(&current) {
            *z += c;
        }
        out.push(r);
    }
    let b = out.pop().unwrap();
    let a = out.pop().unwrap();
    Ok([a, b])
}

/// Conserved energy
/// `int 1/2 (F01^2 + F02^2 + F12^2) + sum_mu |D_mu phi|^2 + 1/2 sum_mu (d_mu N)^2 + U`,
/// with `U = 1/2 (e|phi|^2 + kappa N)^2 + e^2 (N + e v^2/kappa)^2 |phi|^2`.
///
/// Evaluated on a `2n` grid, which integrates the quartic density exactly.
pub fn energy(state: &FieldState, params: &PhysParams) -> Result<f64> {
    let s = state.to_frequency();
    let grid = s.grid();
    let PhysParams { e, kappa, .. } = *params;
    let sh = params.shift();
    let c = curvature(&s);
    let (p1, p2) = (derivative(s.phi(), 1), derivative(s.phi(), 2));
    let (n1, n2) = (derivative(s.neutral(), 1), derivative(s.neutral(), 2));
    let inputs = [
        c.f01.data(),
        c.f02.data(),
        c.f12.data(),
        s.a(0).data(),
        s.a(1).data(),
        s.a(2).data(),
        s.phi().data(),
        s.dphi().data(),
        p1.data(),
        p2.data(),
        s.neutral().data(),
        s.dneutral().data(),
        n1.data(),
        n2.data(),
    ];
    let ie = Complex64::new(0.0, e);
    Ok(padded_integral(&grid, 2 * grid.n(), inputs, |x| {
        let re = |k: usize| x[k].re;
        let p = x[6];
        let rho = p.norm_sqr();
        let field = 0.5 * (re(0).powi(2) + re(1).powi(2) + re(2).powi(2));
        let cov = (x[7] - ie * re(3) * p).norm_sqr()
            + (x[8] - ie * re(4) * p).norm_sqr()
            + (x[9] - ie * re(5) * p).norm_sqr();
        let neutral = 0.5 * (re(11).powi(2) + re(12).powi(2) + re(13).powi(2));
        let nv = re(10);
        let pot = 0.5 * (e * rho + kappa * nv).powi(2) + e * e * (nv + sh).powi(2) * rho;
        field + cov + neutral + pot
    }))
}

/// Names of the norm columns produced by [`record`] when regularity parameters are given.
pub const NORM_COLUMNS: [&str; 5] = ["fl_a0", "fl_a1", "fl_a2", "fl_phi", "fl_n"];

/// Full diagnostics row for a state.
pub fn record(state: &FieldState, params: &PhysParams, reg: Option<&RegularityParams>) -> Result<DiagnosticsRecord> {
    let s = state.to_frequency();
    let [m1, m2] = maxwell_residuals(&s, params)?;
    let mut norms = Vec::new();
    if let Some(reg) = reg {
        let exps = [reg.l, reg.l, reg.l, reg.s, reg.m];
        for (k, name) in NORM_COLUMNS.iter().enumerate() {
            norms.push((name.to_string(), fl_norm(&s.values[k], exps[k], reg.r)?));
        }
    }
    Ok(DiagnosticsRecord {
        t: s.t,
        energy: energy(&s, params)?,
        gauss_res: gauss_residual(&s, params)?.l2_norm(),
        lorenz_res: lorenz_residual(&s).l2_norm(),
        maxwell_res_1: m1.l2_norm(),
        maxwell_res_2: m2.l2_norm(),
        norms,
    })
}

/// Relative energy drift `max_t |E(t) - E(0)| / |E(0)|` over a series of records.
pub fn relative_energy_drift(records: &[DiagnosticsRecord]) -> f64 {
    let Some(first) = records.first() else { return 0.0 };
    let e0 = first.energy.abs().max(f64::MIN_POSITIVE);
    records.iter().map(|r| (r.energy - first.energy).abs() / e0).fold(0.0, f64::max)
}
