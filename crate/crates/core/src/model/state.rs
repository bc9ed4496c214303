use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::spectral::{japanese2, Basis, Grid2D, SpectralField};

/// Evolved unknowns: the gauge potential, the charged scalar and the neutral scalar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Component {
    A0,
    A1,
    A2,
    Phi,
    N,
}

impl Component {
    pub const ALL: [Component; 5] = [Component::A0, Component::A1, Component::A2, Component::Phi, Component::N];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Real-valued components (everything but the charged scalar).
    pub fn is_real(self) -> bool {
        self != Component::Phi
    }

    pub fn name(self) -> &'static str {
        match self {
            Component::A0 => "A0",
            Component::A1 => "A1",
            Component::A2 => "A2",
            Component::Phi => "phi",
            Component::N => "N",
        }
    }
}

/// Direction of a half-wave: `Plus` oscillates like `e^{+it<D>}`, `Minus` like `e^{-it<D>}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Second-order state: values and time derivatives of the five components at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldState {
    pub values: [SpectralField; 5],
    pub rates: [SpectralField; 5],
    pub t: f64,
}

impl FieldState {
    pub fn zeros(grid: Grid2D) -> Self {
        let z = SpectralField::zeros(grid, Basis::Frequency);
        Self { values: std::array::from_fn(|_| z.clone()), rates: std::array::from_fn(|_| z.clone()), t: 0.0 }
    }

    pub fn new(values: [SpectralField; 5], rates: [SpectralField; 5], t: f64) -> Result<Self> {
        let g = values[0].grid();
        for f in values.iter().chain(rates.iter()) {
            g.check_same(&f.grid())?;
        }
        Ok(Self { values, rates, t })
    }

    pub fn grid(&self) -> Grid2D {
        self.values[0].grid()
    }

    pub fn value(&self, c: Component) -> &SpectralField {
        &self.values[c.index()]
    }

    pub fn rate(&self, c: Component) -> &SpectralField {
        &self.rates[c.index()]
    }

    /// `A_mu` for `mu` in `0..3`.
    pub fn a(&self, mu: usize) -> &SpectralField {
        &self.values[mu]
    }

    /// `d_t A_mu`.
    pub fn da(&self, mu: usize) -> &SpectralField {
        &self.rates[mu]
    }

    pub fn phi(&self) -> &SpectralField {
        &self.values[3]
    }

    pub fn dphi(&self) -> &SpectralField {
        &self.rates[3]
    }

    pub fn neutral(&self) -> &SpectralField {
        &self.values[4]
    }

    pub fn dneutral(&self) -> &SpectralField {
        &self.rates[4]
    }

    pub fn to_frequency(&self) -> Self {
        Self {
            values: std::array::from_fn(|i| self.values[i].to_frequency()),
            rates: std::array::from_fn(|i| self.rates[i].to_frequency()),
            t: self.t,
        }
    }

    pub fn to_physical(&self) -> Self {
        Self {
            values: std::array::from_fn(|i| self.values[i].to_physical()),
            rates: std::array::from_fn(|i| self.rates[i].to_physical()),
            t: self.t,
        }
    }

    /// Root-sum-square of the component-wise L2 distances.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        let mut acc = 0.0;
        for (a, b) in self.values.iter().zip(&other.values).chain(self.rates.iter().zip(&other.rates)) {
            acc += a.distance(b)?.powi(2);
        }
        Ok(acc.sqrt())
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().chain(self.rates.iter()).map(|f| f.l2_norm().powi(2)).sum::<f64>().sqrt()
    }

    /// Largest relative imaginary part among the real components.
    pub fn realness_defect(&self) -> f64 {
        Component::ALL
            .iter()
            .filter(|c| c.is_real())
            .flat_map(|&c| [self.value(c).realness_defect(), self.rate(c).realness_defect()])
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .iter()
            .chain(self.rates.iter())
            .all(|f| f.data().iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }
}

/// First-order half-wave state `u_{+-} = (u -+ i <D>^{-1} u_t) / 2`, kept in the frequency basis.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfWaveState {
    pub plus: [SpectralField; 5],
    pub minus: [SpectralField; 5],
    pub t: f64,
}

impl HalfWaveState {
    pub fn grid(&self) -> Grid2D {
        self.plus[0].grid()
    }

    pub fn get(&self, c: Component, s: Sign) -> &SpectralField {
        match s {
            Sign::Plus => &self.plus[c.index()],
            Sign::Minus => &self.minus[c.index()],
        }
    }

    pub fn distance(&self, other: &Self) -> Result<f64> {
        let mut acc = 0.0;
        for (a, b) in self.plus.iter().zip(&other.plus).chain(self.minus.iter().zip(&other.minus)) {
            acc += a.distance(b)?.powi(2);
        }
        Ok(acc.sqrt())
    }
}

pub(crate) fn bracket_table(grid: &Grid2D) -> Vec<f64> {
    let xi = grid.frequencies();
    let n = grid.n();
    let mut out = Vec::with_capacity(n * n);
    for &a in &xi {
        for &b in &xi {
            out.push(japanese2(a, b));
        }
    }
    out
}

/// Splits a second-order state into half-waves.
pub fn split(state: &FieldState) -> HalfWaveState {
    let grid = state.grid();
    let jb = bracket_table(&grid);
    let mut plus: [SpectralField; 5] = std::array::from_fn(|_| SpectralField::zeros(grid, Basis::Frequency));
    let mut minus = plus.clone();
    for c in 0..5 {
        let u = state.values[c].to_frequency();
        let ut = state.rates[c].to_frequency();
        let (p, m) = (plus[c].data_mut(), minus[c].data_mut());
        for k in 0..grid.len() {
            let w = Complex64::new(0.0, 1.0 / jb[k]) * ut.data()[k];
            p[k] = 0.5 * (u.data()[k] - w);
        }
        for k in 0..grid.len() {
            let w = Complex64::new(0.0, 1.0 / jb[k]) * ut.data()[k];
            m[k] = 0.5 * (u.data()[k] + w);
        }
    }
    HalfWaveState { plus, minus, t: state.t }
}

/// Recombines half-waves: `u = u_+ + u_-`, `u_t = i <D> (u_+ - u_-)`.
pub fn unsplit(hw: &HalfWaveState) -> FieldState {
    let grid = hw.grid();
    let jb = bracket_table(&grid);
    let mut values: [SpectralField; 5] = std::array::from_fn(|_| SpectralField::zeros(grid, Basis::Frequency));
    let mut rates = values.clone();
    for c in 0..5 {
        let p = hw.plus[c].to_frequency();
        let m = hw.minus[c].to_frequency();
        let (v, r) = (values[c].data_mut(), rates[c].data_mut());
        for k in 0..grid.len() {
            v[k] = p.data()[k] + m.data()[k];
            r[k] = Complex64::new(0.0, jb[k]) * (p.data()[k] - m.data()[k]);
        }
    }
    FieldState { values, rates, t: hw.t }
}
