use num_complex::Complex64;
use serde::Serialize;

use super::params::PhysParams;
use super::pointwise::{im_xcy, padded_eval};
use super::rhs::derivative;
use super::state::FieldState;
use crate::error::{Error, Result};
use crate::spectral::{japanese2, padded_size, Basis, Grid2D, Padder, SpectralField};

/// Freely prescribable Cauchy data; `a00` and `a01` are determined by the constraints.
#[derive(Clone, Debug)]
pub struct FreeData {
    pub a10: SpectralField,
    pub a20: SpectralField,
    pub a11: SpectralField,
    pub a21: SpectralField,
    pub phi0: SpectralField,
    pub phi1: SpectralField,
    pub n0: SpectralField,
    pub n1: SpectralField,
}

/// Outcome of the constraint solve.
#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    /// L2 norm of the Gauss-law residual of the returned state.
    pub gauss_residual: f64,
    pub iterations: usize,
    /// Magnitude of the mean removed from the right-hand side when the operator is singular.
    pub mean_projection: f64,
}

pub const GAUSS_TOL: f64 = 1e-10;
pub const GAUSS_MAX_ITER: usize = 500;

/// Completes free data to a state satisfying the Gauss law and the Lorenz condition at `t = 0`.
///
/// Solves `(Delta - 2e^2|phi0|^2) a00 = d1 a11 + d2 a21 + kappa (d1 a20 - d2 a10)
/// + 2e Im(phi0 conj phi1)` and sets `a01 = d1 a10 + d2 a20`.
pub fn make_compatible_data(data: &FreeData, params: &PhysParams) -> Result<(FieldState, SolveReport)> {
    let grid = data.a10.grid();
    for f in [&data.a20, &data.a11, &data.a21, &data.phi0, &data.phi1, &data.n0, &data.n1] {
        grid.check_same(&f.grid())?;
    }
    let e = params.e;
    let kappa = params.kappa;
    let phi0 = data.phi0.to_frequency();
    let phi1 = data.phi1.to_frequency();
    let n = grid.n();

    let charge = padded_eval(&grid, padded_size(n, 2), [phi0.data(), phi1.data()], |x| {
        Complex64::new(2.0 * e * im_xcy(x[0], x[1]), 0.0)
    });
    let mut f = derivative(&data.a11, 1)
        .add(&derivative(&data.a21, 2))?
        .add(&derivative(&data.a20, 1).sub(&derivative(&data.a10, 2))?.scaled(kappa))?;
    for (z, c) in f.data_mut().iter_mut().zip(&charge) {
        *z += c;
    }

    let (a00, iterations, mean_projection) = if e == 0.0 || phi0.max_abs() == 0.0 {
        let (a, proj) = solve_laplace(&f)?;
        (a, 0, proj)
    } else {
        let (a, it) = solve_pcg(&f, &phi0, e)?;
        (a, it, 0.0)
    };

    let a01 = derivative(&data.a10, 1).add(&derivative(&data.a20, 2))?;
    let fr = |u: &SpectralField| u.to_frequency();
    let state = FieldState::new(
        [a00, fr(&data.a10), fr(&data.a20), phi0, fr(&data.n0)],
        [a01, fr(&data.a11), fr(&data.a21), phi1, fr(&data.n1)],
        0.0,
    )?;
    let gauss_residual = crate::diagnostics::gauss_residual(&state, params)?.l2_norm();
    Ok((state, SolveReport { gauss_residual, iterations, mean_projection }))
}

/// `Delta a = f` on the mean-zero subspace.
fn solve_laplace(f: &SpectralField) -> Result<(SpectralField, f64)> {
    let grid = f.grid();
    let mut a = f.to_frequency();
    let mean = a.mean().norm();
    let scale = f.l2_norm().max(1.0) / grid.period();
    if mean > 1e-8 * scale {
        return Err(Error::Constraint(format!(
            "Gauss law has no solution: right-hand side has mean {mean:.3e} and the operator annihilates constants"
        )));
    }
    let xi = grid.frequencies();
    let n = grid.n();
    for i in 0..n {
        for j in 0..n {
            let k2 = xi[i] * xi[i] + xi[j] * xi[j];
            let z = &mut a.data_mut()[i * n + j];
            *z =
                if k2 == 0.0 || grid.is_nyquist(i) || grid.is_nyquist(j) { Complex64::new(0.0, 0.0) } else { -*z / k2 };
        }
    }
    Ok((a, mean))
}

struct GaussOperator {
    grid: Grid2D,
    pad: Padder,
    weight: Vec<f64>,
    k2: Vec<f64>,
    precond: Vec<f64>,
    buf: Vec<Complex64>,
}

impl GaussOperator {
    fn new(phi0: &SpectralField, e: f64) -> Self {
        let grid = phi0.grid();
        let n = grid.n();
        let pad = Padder::new(n, padded_size(n, 3));
        let m = pad.m();
        let mut buf = vec![Complex64::new(0.0, 0.0); m * m];
        pad.pad_into(phi0.data(), &mut buf);
        let weight = buf.iter().map(|p| 2.0 * e * e * p.norm_sqr()).collect();
        let xi = grid.frequencies();
        let mut k2 = vec![0.0; n * n];
        let mut precond = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if grid.is_nyquist(i) || grid.is_nyquist(j) {
                    continue;
                }
                k2[i * n + j] = xi[i] * xi[i] + xi[j] * xi[j];
                precond[i * n + j] = japanese2(xi[i], xi[j]).powi(-2);
            }
        }
        Self { grid, pad, weight, k2, precond, buf }
    }

    /// `(-Delta + w) x`, with `w x` projected onto the band.
    fn apply(&mut self, x: &[Complex64], out: &mut [Complex64]) {
        self.pad.pad_into(x, &mut self.buf);
        for (b, w) in self.buf.iter_mut().zip(&self.weight) {
            *b = Complex64::new(b.re * w, 0.0);
        }
        self.pad.unpad(&mut self.buf, out);
        for ((o, xk), k2) in out.iter_mut().zip(x).zip(&self.k2) {
            *o += k2 * xk;
        }
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.re * y.re + x.im * y.im).sum()
}

/// Preconditioned conjugate gradients for `(-Delta + 2e^2|phi0|^2) a = -f`.
fn solve_pcg(f: &SpectralField, phi0: &SpectralField, e: f64) -> Result<(SpectralField, usize)> {
    let mut op = GaussOperator::new(phi0, e);
    let grid = op.grid;
    let h = grid.spacing();
    let b: Vec<Complex64> = f.to_frequency().without_nyquist().data().iter().map(|z| -z).collect();
    let nn = b.len();
    let tol = GAUSS_TOL * (dot(&b, &b).sqrt() * h).max(1.0);
    let mut x = vec![Complex64::new(0.0, 0.0); nn];
    let mut r = b.clone();
    let mut z: Vec<Complex64> = r.iter().zip(&op.precond).map(|(a, p)| a * p).collect();
    let mut p = z.clone();
    let mut ap = vec![Complex64::new(0.0, 0.0); nn];
    let mut rz = dot(&r, &z);
    let mut res = dot(&r, &r).sqrt() * h;
    for it in 0..=GAUSS_MAX_ITER {
        if res <= tol {
            return Ok((SpectralField::from_data(grid, Basis::Frequency, x)?, it));
        }
        if it == GAUSS_MAX_ITER {
            break;
        }
        op.apply(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        for k in 0..nn {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        res = dot(&r, &r).sqrt() * h;
        for k in 0..nn {
            z[k] = r[k] * op.precond[k];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for k in 0..nn {
            p[k] = z[k] + beta * p[k];
        }
    }
    Err(Error::NonConvergence { iterations: GAUSS_MAX_ITER, residual: res })
}
