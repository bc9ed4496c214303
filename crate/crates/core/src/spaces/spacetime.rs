use std::f64::consts::PI;

use num_complex::Complex64;

use super::regularity::{check_r, lp_sum};
use crate::error::{Error, Result};
use crate::model::Sign;
use crate::spectral::fft::{fft3, Direction};
use crate::spectral::{japanese, japanese2, Basis, Grid2D, SpectralField, WindowInfo, WindowKind, MIN_TIME_SAMPLES};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Space-time samples `u(t_j, x)` on `nt` equispaced times, stored `[t][x1][x2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceTimeField {
    grid: Grid2D,
    nt: usize,
    dt: f64,
    data: Vec<Complex64>,
    window: Option<WindowInfo>,
}

/// Index map from an `n`-point lattice into a larger `m`-point one; Nyquist is dropped.
fn embed(n: usize, m: usize) -> Vec<Option<usize>> {
    (0..n)
        .map(|i| {
            if i == n / 2 {
                None
            } else if i < n / 2 {
                Some(i)
            } else {
                Some(m + i - n)
            }
        })
        .collect()
}

fn signed_index(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

impl SpaceTimeField {
    /// Stacks time slices sampled `dt` apart.
    pub fn from_slices(slices: &[SpectralField], dt: f64) -> Result<Self> {
        let first = slices.first().ok_or(Error::TooFewSamples { needed: MIN_TIME_SAMPLES, got: 0 })?;
        let grid = first.grid();
        let mut data = Vec::with_capacity(grid.len() * slices.len());
        for s in slices {
            grid.check_same(&s.grid())?;
            data.extend_from_slice(s.to_physical().data());
        }
        Self::from_samples(grid, slices.len(), dt, data)
    }

    pub fn from_samples(grid: Grid2D, nt: usize, dt: f64, data: Vec<Complex64>) -> Result<Self> {
        if nt < 2 || nt % 2 != 0 {
            return Err(Error::param("nt", format!("{nt} must be even")));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::param("dt", "must be positive"));
        }
        if data.len() != nt * grid.len() {
            return Err(Error::GridMismatch(format!("{} samples for {} x {}", data.len(), nt, grid.len())));
        }
        Ok(Self { grid, nt, dt, data, window: None })
    }

    /// Builds the field whose continuum space-time transform at lattice `(tau_l, xi_k)` is `spec`.
    pub fn from_continuum_spectrum(grid: Grid2D, nt: usize, dt: f64, mut spec: Vec<Complex64>) -> Result<Self> {
        let n = grid.n();
        let h = grid.spacing();
        let scale = 1.0 / (h * h * dt * (nt * n * n) as f64);
        if spec.len() != nt * n * n {
            return Err(Error::GridMismatch("spectrum size".into()));
        }
        fft3(&mut spec, nt, n, Direction::Inverse, scale);
        Self::from_samples(grid, nt, dt, spec)
    }

    pub fn grid(&self) -> Grid2D {
        self.grid
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn window_info(&self) -> Option<WindowInfo> {
        self.window
    }

    /// Time-frequency lattice spacing `2 pi / (nt dt)`.
    pub fn dtau(&self) -> f64 {
        2.0 * PI / (self.nt as f64 * self.dt)
    }

    pub fn tau(&self, l: usize) -> f64 {
        self.dtau() * signed_index(l, self.nt) as f64
    }

    /// Time slice `j` as a physical-basis field.
    pub fn slice(&self, j: usize) -> SpectralField {
        let nn = self.grid.len();
        SpectralField::from_data(self.grid, Basis::Physical, self.data[j * nn..(j + 1) * nn].to_vec()).unwrap()
    }

    /// Applies the time taper once; a second application is rejected.
    pub fn windowed(mut self, kind: WindowKind) -> Result<Self> {
        if self.window.is_some() {
            return Err(Error::Precondition("field is already windowed".into()));
        }
        if self.nt < MIN_TIME_SAMPLES {
            return Err(Error::TooFewSamples { needed: MIN_TIME_SAMPLES, got: self.nt });
        }
        let w = kind.weights(self.nt);
        let nn = self.grid.len();
        for (j, wj) in w.iter().enumerate() {
            self.data[j * nn..(j + 1) * nn].iter_mut().for_each(|z| *z *= wj);
        }
        self.window = Some(kind.info(self.nt, 1));
        Ok(self)
    }

    /// Continuum transform `int int u e^{-i(t tau + x.xi)} dx dt` on the lattice, `[tau][xi1][xi2]`.
    pub fn continuum_spectrum(&self) -> Vec<Complex64> {
        let h = self.grid.spacing();
        let mut s = self.data.clone();
        fft3(&mut s, self.nt, self.grid.n(), Direction::Forward, h * h * self.dt);
        s
    }

    /// Band-limited interpolation onto a finer lattice with `n2` points per axis and `nt2` times
    /// over the same period and duration.
    pub fn refined(&self, n2: usize, nt2: usize) -> Result<Self> {
        let n = self.grid.n();
        if n2 < n || nt2 < self.nt || nt2 % 2 != 0 {
            return Err(Error::param("refinement", "target lattice must be at least as fine"));
        }
        let g2 = Grid2D::new(n2, self.grid.period())?;
        let mut s = self.data.clone();
        fft3(&mut s, self.nt, n, Direction::Forward, 1.0);
        let (et, ex) = (embed(self.nt, nt2), embed(n, n2));
        let mut big = vec![ZERO; nt2 * n2 * n2];
        for l in 0..self.nt {
            let Some(l2) = et[l] else { continue };
            for i in 0..n {
                let Some(i2) = ex[i] else { continue };
                for j in 0..n {
                    let Some(j2) = ex[j] else { continue };
                    big[(l2 * n2 + i2) * n2 + j2] = s[(l * n + i) * n + j];
                }
            }
        }
        fft3(&mut big, nt2, n2, Direction::Inverse, 1.0 / (self.nt * n * n) as f64);
        let dt2 = self.dt * self.nt as f64 / nt2 as f64;
        Ok(Self { grid: g2, nt: nt2, dt: dt2, data: big, window: self.window })
    }

    /// Pointwise product; window powers add.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        if self.nt != other.nt {
            return Err(Error::GridMismatch("time lattices differ".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a * b).collect();
        let window = match (self.window, other.window) {
            (Some(a), Some(b)) if a.kind == b.kind => Some(a.kind.info(self.nt, a.power + b.power)),
            (None, None) => None,
            _ => return Err(Error::Precondition("cannot multiply fields with different windows".into())),
        };
        Ok(Self { data, window, ..self.clone() })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        if self.nt != other.nt || self.window != other.window {
            return Err(Error::GridMismatch("time lattices or windows differ".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { data, ..self.clone() })
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self { data: self.data.iter().map(|z| z * c).collect(), ..self.clone() }
    }

    /// Weighted `L^{r'}` norm of the continuum spectrum, corrected for the taper energy.
    pub fn weighted_norm(&self, r: f64, weight: impl Fn(f64, f64, f64) -> f64) -> Result<f64> {
        let rp = check_r(r)?;
        let info = self.window.ok_or_else(|| Error::Precondition("space-time norms need a windowed field".into()))?;
        let spec = self.continuum_spectrum();
        let n = self.grid.n();
        let xi = self.grid.frequencies();
        let taus: Vec<f64> = (0..self.nt).map(|l| self.tau(l)).collect();
        let vals = spec.iter().enumerate().map(|(q, z)| {
            let (l, k) = (q / (n * n), q % (n * n));
            weight(taus[l], xi[k / n], xi[k % n]) * z.norm()
        });
        let dk = self.grid.dk();
        let measure = dk * dk * self.dtau();
        Ok(lp_sum(vals, rp, measure) / info.energy_factor.sqrt())
    }
}

/// `|| <xi>^s <|tau| - |xi|>^b u~ ||_{L^{r'}}`.
pub fn wave_sobolev_norm(u: &SpaceTimeField, s: f64, b: f64, r: f64) -> Result<f64> {
    u.weighted_norm(r, |tau, a, c| {
        let k = (a * a + c * c).sqrt();
        japanese2(a, c).powf(s) * japanese(tau.abs() - k).powf(b)
    })
}

/// `|| <xi>^s <tau +- |xi|>^b u~ ||_{L^{r'}}` for the sign `sign`.
pub fn signed_norm(u: &SpaceTimeField, s: f64, b: f64, r: f64, sign: Sign) -> Result<f64> {
    let sg = sign.value();
    u.weighted_norm(r, move |tau, a, c| {
        let k = (a * a + c * c).sqrt();
        japanese2(a, c).powf(s) * japanese(tau + sg * k).powf(b)
    })
}
