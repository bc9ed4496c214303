//! Initial-data generators. Every generator routes through the constraint solve.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{derivative, make_compatible_data, FieldState, FreeData, PhysParams, SolveReport};
use crate::spectral::{Basis, Grid2D, SpectralField};

fn default_amp() -> f64 {
    0.1
}

fn default_width() -> f64 {
    2.0
}

/// Named data generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DataSpec {
    Zero,
    /// Gaussian bumps of width `width` near the torus centre in every free field.
    GaussianBump {
        #[serde(default = "default_amp")]
        amp: f64,
        #[serde(default = "default_width")]
        width: f64,
    },
    /// Charged plane wave `amp e^{i k.x}` on lattice mode `k`, moving with its linear frequency.
    PlaneWave {
        #[serde(default = "default_amp")]
        amp: f64,
        k: [i64; 2],
    },
    /// Random fields with frequencies `k_min <= |xi| <= k_max`, each scaled to sup norm `amp`.
    RandomBand {
        #[serde(default = "default_amp")]
        amp: f64,
        k_min: f64,
        k_max: f64,
        #[serde(default)]
        seed: u64,
    },
}

impl Default for DataSpec {
    fn default() -> Self {
        DataSpec::GaussianBump { amp: default_amp(), width: default_width() }
    }
}

fn bump(grid: Grid2D, amp: f64, width: f64, offset: [f64; 2]) -> SpectralField {
    let c = 0.5 * grid.period();
    SpectralField::from_real_fn(grid, |x, y| {
        let (dx, dy) = (x - c - offset[0], y - c - offset[1]);
        amp * (-(dx * dx + dy * dy) / (width * width)).exp()
    })
    .into_frequency()
    .without_nyquist()
}

/// Builds constraint-compatible initial data for `spec`.
pub fn generate_data(spec: &DataSpec, grid: Grid2D, params: &PhysParams) -> Result<(FieldState, SolveReport)> {
    let zero = SpectralField::zeros(grid, Basis::Frequency);
    let free = match *spec {
        DataSpec::Zero => FreeData {
            a10: zero.clone(),
            a20: zero.clone(),
            a11: zero.clone(),
            a21: zero.clone(),
            phi0: zero.clone(),
            phi1: zero.clone(),
            n0: zero.clone(),
            n1: zero,
        },
        DataSpec::GaussianBump { amp, width } => {
            if !(width > 0.0 && amp.is_finite()) {
                return Err(Error::param("width", "must be positive"));
            }
            let g = bump(grid, 1.0, width, [0.0, 0.0]);
            let phi0 = g.scaled_complex(Complex64::new(amp, 0.5 * amp));
            FreeData {
                a10: bump(grid, amp, width, [1.0, 0.0]),
                a20: bump(grid, -amp, width, [0.0, 1.0]),
                a11: zero.clone(),
                a21: zero.clone(),
                // a real multiple of phi0 carries no charge density
                phi1: phi0.scaled(0.5),
                phi0,
                n0: bump(grid, amp, width, [-1.0, -1.0]),
                n1: zero,
            }
        }
        DataSpec::PlaneWave { amp, k } => {
            let idx = grid
                .mode_index(k[0], k[1])
                .filter(|_| k[0].abs() < grid.n() as i64 / 2 && k[1].abs() < grid.n() as i64 / 2)
                .ok_or_else(|| Error::param("k", format!("{k:?} is not inside the band")))?;
            let mut phi0 = zero.clone();
            phi0.data_mut()[idx] = Complex64::new(amp * grid.n() as f64, 0.0);
            let (x1, x2) = (grid.dk() * k[0] as f64, grid.dk() * k[1] as f64);
            let mass2 = (params.e * params.shift()).powi(2);
            let omega = (x1 * x1 + x2 * x2 + mass2).sqrt();
            FreeData {
                a10: zero.clone(),
                a20: zero.clone(),
                a11: zero.clone(),
                a21: zero.clone(),
                phi1: phi0.scaled_complex(Complex64::new(0.0, -omega)),
                phi0,
                n0: zero.clone(),
                n1: zero,
            }
        }
        DataSpec::RandomBand { amp, k_min, k_max, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut f = |real: bool| -> Result<SpectralField> {
                let u = random_band_field(grid, k_min, k_max, real, &mut rng)?;
                let mx = u.to_physical().max_abs();
                Ok(if mx > 0.0 { u.scaled(amp / mx) } else { u })
            };
            FreeData {
                a10: f(true)?,
                a20: f(true)?,
                a11: f(true)?,
                a21: f(true)?,
                phi0: f(false)?,
                phi1: f(false)?,
                n0: f(true)?,
                n1: f(true)?,
            }
        }
    };
    make_compatible_data(&free, params)
}

/// Random field with independent Gaussian coefficients on `k_min <= |xi| <= k_max`
/// (Nyquist excluded); Hermitian-symmetrized when `real`.
pub fn random_band_field(
    grid: Grid2D,
    k_min: f64,
    k_max: f64,
    real: bool,
    rng: &mut impl Rng,
) -> Result<SpectralField> {
    if !(k_min >= 0.0 && k_max >= k_min) {
        return Err(Error::param("band", format!("[{k_min}, {k_max}] is not a valid band")));
    }
    let n = grid.n();
    let xi = grid.frequencies();
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    let mut count = 0;
    for i in 0..n {
        for j in 0..n {
            if grid.is_nyquist(i) || grid.is_nyquist(j) {
                continue;
            }
            let k = (xi[i] * xi[i] + xi[j] * xi[j]).sqrt();
            if k >= k_min && k <= k_max {
                let (a, b): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
                data[i * n + j] = Complex64::new(a, b);
                count += 1;
            }
        }
    }
    if count == 0 {
        return Err(Error::param("band", "contains no lattice modes"));
    }
    let u = SpectralField::from_data(grid, Basis::Frequency, data)?;
    Ok(if real { u.real_part() } else { u })
}

/// Random second-order state (not constraint-compatible), optionally satisfying the Lorenz condition.
pub fn random_state(grid: Grid2D, amp: f64, k_max: f64, lorenz: bool, seed: u64) -> Result<FieldState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = |real: bool| -> Result<SpectralField> {
        let u = random_band_field(grid, 0.0, k_max, real, &mut rng)?;
        let mx = u.to_physical().max_abs();
        Ok(u.scaled(amp / mx))
    };
    let values = [f(true)?, f(true)?, f(true)?, f(false)?, f(true)?];
    let mut rates = [f(true)?, f(true)?, f(true)?, f(false)?, f(true)?];
    if lorenz {
        rates[0] = derivative(&values[1], 1).add(&derivative(&values[2], 2))?;
    }
    FieldState::new(values, rates, 0.0)
}
