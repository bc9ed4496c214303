use num_complex::Complex64;

use super::conventions::EPS12;
use super::params::PhysParams;
use super::pointwise::{im_xcy, padded_eval};
use super::state::{bracket_table, FieldState, HalfWaveState};
use crate::error::Result;
use crate::spectral::{padded_size, Basis, Grid2D, Padder, SpectralField};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Switches for individual terms of the right-hand side, used by tests.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RhsOptions {
    /// Keep the `+u` terms that move the mass term of `(box + 1) u = F` into `F`.
    pub include_shift: bool,
}

impl Default for RhsOptions {
    fn default() -> Self {
        Self { include_shift: true }
    }
}

struct Tables {
    grid: Grid2D,
    params: PhysParams,
    opts: RhsOptions,
    pad: Padder,
    /// Per-axis frequencies with the Nyquist entry zeroed, for derivatives.
    xid: Vec<f64>,
    jb: Vec<f64>,
    refl: Vec<usize>,
}

/// Reusable evaluator of the nonlinear right-hand side `F` of `(box + 1) u = F`.
///
/// All products are formed once per call on a `2n` grid, which is alias-free for
/// every term of degree at most three.
pub struct RhsEngine {
    t: Tables,
    spec: Vec<Complex64>,
    pbuf: [Vec<Complex64>; 6],
    vals: [Vec<Complex64>; 5],
    rts: [Vec<Complex64>; 5],
    fout: [Vec<Complex64>; 5],
}

impl RhsEngine {
    pub fn new(grid: Grid2D, params: PhysParams, opts: RhsOptions) -> Self {
        let n = grid.n();
        let m = padded_size(n, 3);
        let xid = (0..n).map(|i| if grid.is_nyquist(i) { 0.0 } else { grid.xi(i) }).collect();
        let mut refl = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                refl[i * n + j] = ((n - i) % n) * n + (n - j) % n;
            }
        }
        let nn = vec![ZERO; n * n];
        Self {
            t: Tables { grid, params, opts, pad: Padder::new(n, m), xid, jb: bracket_table(&grid), refl },
            spec: nn.clone(),
            pbuf: std::array::from_fn(|_| vec![ZERO; m * m]),
            vals: std::array::from_fn(|_| nn.clone()),
            rts: std::array::from_fn(|_| nn.clone()),
            fout: std::array::from_fn(|_| nn.clone()),
        }
    }

    pub fn grid(&self) -> Grid2D {
        self.t.grid
    }

    pub fn params(&self) -> PhysParams {
        self.t.params
    }

    /// `F` for a second-order state; returned in the frequency basis.
    pub fn second_order(&mut self, state: &FieldState) -> Result<[SpectralField; 5]> {
        let st = state.to_frequency();
        self.t.grid.check_same(&st.grid())?;
        let v: [&[Complex64]; 5] = std::array::from_fn(|c| st.values[c].data());
        let r: [&[Complex64]; 5] = std::array::from_fn(|c| st.rates[c].data());
        eval(&self.t, &mut self.spec, &mut self.pbuf, v, r, &mut self.fout);
        let g = self.t.grid;
        Ok(std::array::from_fn(|c| SpectralField::from_data(g, Basis::Frequency, self.fout[c].clone()).unwrap()))
    }

    /// Nonlinear half-wave terms `N_{+-} = -+ (i/2) <D>^{-1} F` written into `plus` / `minus`.
    pub(crate) fn halfwave_nonlinear(
        &mut self,
        hp: [&[Complex64]; 5],
        hm: [&[Complex64]; 5],
        plus: &mut [Vec<Complex64>; 5],
        minus: &mut [Vec<Complex64>; 5],
    ) {
        let jb = &self.t.jb;
        for c in 0..5 {
            let (v, r) = (&mut self.vals[c], &mut self.rts[c]);
            for k in 0..jb.len() {
                v[k] = hp[c][k] + hm[c][k];
                r[k] = I * jb[k] * (hp[c][k] - hm[c][k]);
            }
        }
        let v: [&[Complex64]; 5] = std::array::from_fn(|c| self.vals[c].as_slice());
        let r: [&[Complex64]; 5] = std::array::from_fn(|c| self.rts[c].as_slice());
        eval(&self.t, &mut self.spec, &mut self.pbuf, v, r, &mut self.fout);
        for c in 0..5 {
            for k in 0..jb.len() {
                let w = self.fout[c][k] * (0.5 / jb[k]);
                plus[c][k] = -I * w;
                minus[c][k] = I * w;
            }
        }
    }

    pub(crate) fn bracket(&self) -> &[f64] {
        &self.t.jb
    }
}

fn eval(
    t: &Tables,
    spec: &mut [Complex64],
    pbuf: &mut [Vec<Complex64>; 6],
    v: [&[Complex64]; 5],
    r: [&[Complex64]; 5],
    out: &mut [Vec<Complex64>; 5],
) {
    let n = t.grid.n();
    let nn = n * n;
    let PhysParams { e, kappa, .. } = t.params;
    let sh = t.params.shift();
    let lin = if t.opts.include_shift { 1.0 } else { 0.0 };

    for k in 0..nn {
        spec[k] = v[0][k] + I * v[1][k];
    }
    t.pad.pad_into(spec, &mut pbuf[0]);
    for k in 0..nn {
        spec[k] = v[2][k] + I * v[4][k];
    }
    t.pad.pad_into(spec, &mut pbuf[1]);
    t.pad.pad_into(v[3], &mut pbuf[2]);
    t.pad.pad_into(r[3], &mut pbuf[3]);
    for axis in 0..2 {
        for i in 0..n {
            for j in 0..n {
                let x = if axis == 0 { t.xid[i] } else { t.xid[j] };
                spec[i * n + j] = I * x * v[3][i * n + j];
            }
        }
        t.pad.pad_into(spec, &mut pbuf[4 + axis]);
    }

    {
        let [b0, b1, b2, b3, b4, b5] = pbuf;
        let e2 = e * e;
        for q in 0..b0.len() {
            let (a0, a1) = (b0[q].re, b0[q].im);
            let (a2, nf) = (b1[q].re, b1[q].im);
            let (p, pt, p1, p2) = (b2[q], b3[q], b4[q], b5[q]);
            let rho = p.norm_sqr();
            let g0 = -2.0 * e * im_xcy(p, pt) - 2.0 * e2 * a0 * rho;
            let g1 = -2.0 * e * im_xcy(p, p1) - 2.0 * e2 * a1 * rho;
            let g2 = -2.0 * e * im_xcy(p, p2) - 2.0 * e2 * a2 * rho;
            let gn = -(kappa * e * rho + 2.0 * e2 * (nf + sh) * rho);
            let scal = e2 * (a0 * a0 - a1 * a1 - a2 * a2) - (e * rho + kappa * nf) - e2 * (nf * nf + 2.0 * sh * nf);
            let gphi = I * (2.0 * e) * (a0 * pt - a1 * p1 - a2 * p2) + scal * p;
            b0[q] = Complex64::new(g0, g1);
            b1[q] = Complex64::new(g2, gn);
            b2[q] = gphi;
        }
    }

    t.pad.unpad(&mut pbuf[0], spec);
    unpack(spec, &t.refl, out, 0, 1);
    t.pad.unpad(&mut pbuf[1], spec);
    unpack(spec, &t.refl, out, 2, 4);
    t.pad.unpad(&mut pbuf[2], &mut out[3]);

    for i in 0..n {
        let x1 = t.xid[i];
        for j in 0..n {
            let x2 = t.xid[j];
            let k = i * n + j;
            let f12 = I * x1 * v[2][k] - I * x2 * v[1][k];
            let f01 = r[1][k] - I * x1 * v[0][k];
            let f02 = r[2][k] - I * x2 * v[0][k];
            out[0][k] += -kappa * f12 + lin * v[0][k];
            out[1][k] += -kappa * EPS12 * f02 + lin * v[1][k];
            out[2][k] += kappa * EPS12 * f01 + lin * v[2][k];
            out[3][k] += (lin - e * e * sh * sh) * v[3][k];
            out[4][k] += (lin - kappa * kappa) * v[4][k];
        }
    }
}

/// Separates the transforms of two real signals packed as `x + i y`.
fn unpack(z: &[Complex64], refl: &[usize], out: &mut [Vec<Complex64>; 5], a: usize, b: usize) {
    for k in 0..z.len() {
        let zr = z[refl[k]].conj();
        out[a][k] = 0.5 * (z[k] + zr);
        out[b][k] = Complex64::new(0.0, -0.5) * (z[k] - zr);
    }
}

/// Right-hand side `F` of `(box + 1) u = F` for each component, in the frequency basis.
pub fn rhs_second_order(state: &FieldState, params: &PhysParams) -> Result<[SpectralField; 5]> {
    rhs_second_order_with(state, params, RhsOptions::default())
}

pub fn rhs_second_order_with(state: &FieldState, params: &PhysParams, opts: RhsOptions) -> Result<[SpectralField; 5]> {
    RhsEngine::new(state.grid(), *params, opts).second_order(state)
}

/// Time derivative of the half-wave state: `d_t u_{+-} = +- i <D> u_{+-} -+ (i/2) <D>^{-1} F`.
pub fn rhs_halfwave(hw: &HalfWaveState, params: &PhysParams) -> Result<HalfWaveState> {
    rhs_halfwave_with(hw, params, RhsOptions::default())
}

pub fn rhs_halfwave_with(hw: &HalfWaveState, params: &PhysParams, opts: RhsOptions) -> Result<HalfWaveState> {
    let grid = hw.grid();
    let mut eng = RhsEngine::new(grid, *params, opts);
    let hp: [SpectralField; 5] = std::array::from_fn(|c| hw.plus[c].to_frequency());
    let hm: [SpectralField; 5] = std::array::from_fn(|c| hw.minus[c].to_frequency());
    let nn = grid.len();
    let mut np: [Vec<Complex64>; 5] = std::array::from_fn(|_| vec![ZERO; nn]);
    let mut nm = np.clone();
    eng.halfwave_nonlinear(
        std::array::from_fn(|c| hp[c].data()),
        std::array::from_fn(|c| hm[c].data()),
        &mut np,
        &mut nm,
    );
    let jb = eng.bracket();
    for c in 0..5 {
        for k in 0..nn {
            np[c][k] += I * jb[k] * hp[c].data()[k];
            nm[c][k] -= I * jb[k] * hm[c].data()[k];
        }
    }
    let mk = |d: Vec<Complex64>| SpectralField::from_data(grid, Basis::Frequency, d).unwrap();
    let [p0, p1, p2, p3, p4] = np;
    let [m0, m1, m2, m3, m4] = nm;
    Ok(HalfWaveState {
        plus: [mk(p0), mk(p1), mk(p2), mk(p3), mk(p4)],
        minus: [mk(m0), mk(m1), mk(m2), mk(m3), mk(m4)],
        t: hw.t,
    })
}

/// Field strength components `F01 = d_t A1 - d1 A0`, `F02 = d_t A2 - d2 A0`, `F12 = d1 A2 - d2 A1`.
#[derive(Clone, Debug)]
pub struct Curvature {
    pub f01: SpectralField,
    pub f02: SpectralField,
    pub f12: SpectralField,
}

pub(crate) fn derivative(u: &SpectralField, axis: usize) -> SpectralField {
    let g = u.grid();
    let n = g.n();
    let mut f = u.to_frequency();
    let d = f.data_mut();
    for i in 0..n {
        for j in 0..n {
            let idx = if axis == 1 { i } else { j };
            let x = if g.is_nyquist(idx) { 0.0 } else { g.xi(idx) };
            d[i * n + j] *= I * x;
        }
    }
    f
}

pub fn curvature(state: &FieldState) -> Curvature {
    let s = state.to_frequency();
    let f01 = s.da(1).sub(&derivative(s.a(0), 1)).unwrap();
    let f02 = s.da(2).sub(&derivative(s.a(0), 2)).unwrap();
    let f12 = derivative(s.a(2), 1).sub(&derivative(s.a(1), 2)).unwrap();
    Curvature { f01, f02, f12 }
}

/// Covariant derivative `D_mu phi = d_mu phi - i e A_mu phi`, with `d_0 = d_t`.
pub fn covariant_derivative(state: &FieldState, mu: usize, params: &PhysParams) -> Result<SpectralField> {
    if mu > 2 {
        return Err(crate::Error::param("mu", format!("{mu} is not a spacetime index")));
    }
    let s = state.to_frequency();
    let grid = s.grid();
    let dphi = if mu == 0 { s.dphi().clone() } else { derivative(s.phi(), mu) };
    let e = params.e;
    let prod = padded_eval(&grid, padded_size(grid.n(), 2), [s.a(mu).data(), s.phi().data()], |x| {
        Complex64::new(x[0].re, 0.0) * x[1]
    });
    let mut out = dphi;
    for (o, p) in out.data_mut().iter_mut().zip(&prod) {
        *o -= I * e * p;
    }
    Ok(out)
}

/// `U_phibar = (e|phi|^2 + kappa N) phi + e^2 (N + e v^2/kappa)^2 phi`, dealiased, frequency basis.
pub fn potential_phi(phi: &SpectralField, neutral: &SpectralField, params: &PhysParams) -> Result<SpectralField> {
    let grid = phi.grid();
    grid.check_same(&neutral.grid())?;
    let (p, nf) = (phi.to_frequency(), neutral.to_frequency());
    let PhysParams { e, kappa, .. } = *params;
    let sh = params.shift();
    let out = padded_eval(&grid, padded_size(grid.n(), 3), [p.data(), nf.data()], |x| {
        let (p, nv) = (x[0], x[1].re);
        ((e * p.norm_sqr() + kappa * nv) + e * e * (nv + sh).powi(2)) * p
    });
    SpectralField::from_data(grid, Basis::Frequency, out)
}

/// `U_N = kappa (e|phi|^2 + kappa N) + 2 e^2 (N + e v^2/kappa) |phi|^2`, dealiased, frequency basis.
pub fn potential_n(phi: &SpectralField, neutral: &SpectralField, params: &PhysParams) -> Result<SpectralField> {
    let grid = phi.grid();
    grid.check_same(&neutral.grid())?;
    let (p, nf) = (phi.to_frequency(), neutral.to_frequency());
    let PhysParams { e, kappa, .. } = *params;
    let sh = params.shift();
    let out = padded_eval(&grid, padded_size(grid.n(), 3), [p.data(), nf.data()], |x| {
        let (rho, nv) = (x[0].norm_sqr(), x[1].re);
        Complex64::new(kappa * (e * rho + kappa * nv) + 2.0 * e * e * (nv + sh) * rho, 0.0)
    });
    SpectralField::from_data(grid, Basis::Frequency, out)
}
