use num_complex::Complex64;

use super::config::Scheme;
use super::phi::Etdrk4Coeffs;
use crate::error::{Error, Result};
use crate::model::{HalfWaveState, PhysParams, RhsEngine, RhsOptions};
use crate::spectral::{Basis, Grid2D, SpectralField};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Ten half-wave arrays: `[plus c0..c4, minus c0..c4]`, frequency basis.
type Hw = [Vec<Complex64>; 10];

fn zeros(nn: usize) -> Hw {
    std::array::from_fn(|_| vec![ZERO; nn])
}

const MIDPOINT_TOL: f64 = 1e-14;
const MIDPOINT_MAX_ITER: usize = 60;

/// Time stepper for the half-wave system with fixed step `dt`.
pub struct Stepper {
    engine: RhsEngine,
    scheme: Scheme,
    dt: f64,
    /// Coefficients for the `+` half-waves; the `-` ones are their conjugates.
    coeffs: Vec<Etdrk4Coeffs>,
    half: Vec<Complex64>,
    nu: Hw,
    na: Hw,
    nb: Hw,
    nc: Hw,
    a: Hw,
    b: Hw,
    c: Hw,
}

impl Stepper {
    pub fn new(grid: Grid2D, params: PhysParams, dt: f64, scheme: Scheme, opts: RhsOptions) -> Self {
        let engine = RhsEngine::new(grid, params, opts);
        let jb = engine.bracket();
        let coeffs = jb.iter().map(|w| Etdrk4Coeffs::new(I * w * dt)).collect();
        let half = jb.iter().map(|w| (I * w * (0.5 * dt)).exp()).collect();
        let nn = grid.len();
        Self {
            engine,
            scheme,
            dt,
            coeffs,
            half,
            nu: zeros(nn),
            na: zeros(nn),
            nb: zeros(nn),
            nc: zeros(nn),
            a: zeros(nn),
            b: zeros(nn),
            c: zeros(nn),
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn nonlinear(engine: &mut RhsEngine, u: &Hw, out: &mut Hw) {
        let (op, om) = out.split_at_mut(5);
        let op: &mut [Vec<Complex64>; 5] = op.try_into().unwrap();
        let om: &mut [Vec<Complex64>; 5] = om.try_into().unwrap();
        engine.halfwave_nonlinear(
            std::array::from_fn(|c| u[c].as_slice()),
            std::array::from_fn(|c| u[5 + c].as_slice()),
            op,
            om,
        );
    }

    /// Advances `u` by one step in place.
    fn advance(&mut self, u: &mut Hw) -> Result<()> {
        match self.scheme {
            Scheme::Etdrk4 => {
                self.etdrk4(u);
                Ok(())
            }
            Scheme::ExpMidpoint => self.midpoint(u),
        }
    }

    fn etdrk4(&mut self, u: &mut Hw) {
        let h = self.dt;
        let co = &self.coeffs;
        let pick = |c: &Etdrk4Coeffs, minus: bool, f: fn(&Etdrk4Coeffs) -> Complex64| {
            let v = f(c);
            if minus {
                v.conj()
            } else {
                v
            }
        };
        Self::nonlinear(&mut self.engine, u, &mut self.nu);
        for s in 0..10 {
            let minus = s >= 5;
            for k in 0..co.len() {
                let e2 = pick(&co[k], minus, |c| c.e2);
                let q = pick(&co[k], minus, |c| c.q);
                self.a[s][k] = e2 * u[s][k] + h * q * self.nu[s][k];
            }
        }
        Self::nonlinear(&mut self.engine, &self.a, &mut self.na);
        for s in 0..10 {
            let minus = s >= 5;
            for k in 0..co.len() {
                let e2 = pick(&co[k], minus, |c| c.e2);
                let q = pick(&co[k], minus, |c| c.q);
                self.b[s][k] = e2 * u[s][k] + h * q * self.na[s][k];
            }
        }
        Self::nonlinear(&mut self.engine, &self.b, &mut self.nb);
        for s in 0..10 {
            let minus = s >= 5;
            for k in 0..co.len() {
                let e2 = pick(&co[k], minus, |c| c.e2);
                let q = pick(&co[k], minus, |c| c.q);
                self.c[s][k] = e2 * self.a[s][k] + h * q * (2.0 * self.nb[s][k] - self.nu[s][k]);
            }
        }
        Self::nonlinear(&mut self.engine, &self.c, &mut self.nc);
        for s in 0..10 {
            let minus = s >= 5;
            for k in 0..co.len() {
                let c = &co[k];
                let (e, f1, f2, f3) =
                    if minus { (c.e.conj(), c.f1.conj(), c.f2.conj(), c.f3.conj()) } else { (c.e, c.f1, c.f2, c.f3) };
                u[s][k] = e * u[s][k]
                    + h * (f1 * self.nu[s][k] + 2.0 * f2 * (self.na[s][k] + self.nb[s][k]) + f3 * self.nc[s][k]);
            }
        }
    }

    /// `u' = E u + h E_{1/2} N(m)`, `m = (E_{1/2} u + E_{-1/2} u') / 2`, by fixed-point iteration.
    fn midpoint(&mut self, u: &mut Hw) -> Result<()> {
        let h = self.dt;
        let half = &self.half;
        let hp = |s: usize, k: usize| if s >= 5 { half[k].conj() } else { half[k] };
        // a = E_{1/2} u (fixed), b = current iterate of u'
        for s in 0..10 {
            for k in 0..half.len() {
                self.a[s][k] = hp(s, k) * u[s][k];
                self.c[s][k] = self.a[s][k];
            }
        }
        let scale = u.iter().flat_map(|v| v.iter()).map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
        for _ in 0..MIDPOINT_MAX_ITER {
            Self::nonlinear(&mut self.engine, &self.c, &mut self.nu);
            let mut change: f64 = 0.0;
            for s in 0..10 {
                for k in 0..half.len() {
                    let e = hp(s, k);
                    let next = e * (self.a[s][k] + h * self.nu[s][k]);
                    change = change.max((next - self.b[s][k]).norm());
                    self.b[s][k] = next;
                    // midpoint m = (E_{1/2} u + E_{-1/2} u') / 2
                    self.c[s][k] = 0.5 * (self.a[s][k] + next / e);
                }
            }
            if change <= MIDPOINT_TOL * scale {
                for s in 0..10 {
                    u[s].copy_from_slice(&self.b[s]);
                }
                return Ok(());
            }
        }
        Err(Error::NonConvergence { iterations: MIDPOINT_MAX_ITER, residual: f64::NAN })
    }

    /// One step of the half-wave state.
    pub fn step(&mut self, hw: &HalfWaveState) -> Result<HalfWaveState> {
        let mut u = to_arrays(hw);
        self.advance(&mut u)?;
        Ok(from_arrays(hw.grid(), u, hw.t + self.dt))
    }

    pub(crate) fn step_arrays(&mut self, u: &mut Hw) -> Result<()> {
        self.advance(u)
    }
}

pub(crate) fn to_arrays(hw: &HalfWaveState) -> Hw {
    std::array::from_fn(|s| if s < 5 { hw.plus[s].to_frequency() } else { hw.minus[s - 5].to_frequency() }.into_data())
}

pub(crate) fn from_arrays(grid: Grid2D, u: Hw, t: f64) -> HalfWaveState {
    let mut it = u.into_iter().map(|d| SpectralField::from_data(grid, Basis::Frequency, d).unwrap());
    let plus = std::array::from_fn(|_| it.next().unwrap());
    let minus = std::array::from_fn(|_| it.next().unwrap());
    HalfWaveState { plus, minus, t }
}

pub(crate) fn all_finite(u: &Hw) -> bool {
    u.iter().all(|v| v.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
}

/// Advances a half-wave state by one step of size `dt`.
pub fn step(hw: &HalfWaveState, params: &PhysParams, dt: f64, scheme: Scheme) -> Result<HalfWaveState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param("dt", "must be positive"));
    }
    Stepper::new(hw.grid(), *params, dt, scheme, RhsOptions::default()).step(hw)
}
