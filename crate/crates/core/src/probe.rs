//! Randomized ratio probes of bilinear and trilinear space-time estimates.
//!
//! Each draw builds near-cone random waves, evaluates the left-hand norm of a product and the
//! product of right-hand norms, and records their ratio. The statistics are evidence only: the
//! windowed discrete norms approximate restriction norms with uncontrolled constants.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datagen::random_band_field;
use crate::error::{Error, Result};
use crate::model::Sign;
use crate::spaces::{check_r, signed_norm, wave_sobolev_norm, SpaceTimeField};
use crate::spectral::{japanese2, padded_size, Grid2D, WindowKind};

/// Right-hand norms below this are treated as empty draws.
pub const MIN_RHS_NORM: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lemma {
    /// `||q12(u, v)||_{H_{0,0}} <~ ||u||_{X_{a1,b,+-1}} ||v||_{X_{a2,b,+-2}}`.
    L31,
    /// As `L31` for `q01`.
    L32,
    /// `||uv||_{H_{0,0}} <~ ||u||_{H_{a1,b1}} ||v||_{H_{a2,b2}}`, dyadic-summed version.
    L34,
    /// As `L34` under the Young/Hoelder hypotheses.
    L35,
    /// `||uv||_{H_{0,b}} <~ ||u||_{H_{a1,b}} ||v||_{H_{a2,b}}`.
    L36,
    /// `||uvw||_{H_{s0-1,0}} <~ ||u||_{H_{s1,b}} ||v||_{H_{s1,b}} ||w||_{H_{s0,b}}`.
    L37,
    /// `||A^mu d_mu phi||_{H_{s-1,0}} <~ sum ||A_mu||_{X_{l,b,+-1}} ||<nabla> phi||_{X_{s-1,b,+-2}}`
    /// with `s = s0`, `l = s1`, in Lorenz gauge.
    #[serde(rename = "estA")]
    EstA,
}

impl std::str::FromStr for Lemma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "l31" => Lemma::L31,
            "l32" => Lemma::L32,
            "l34" => Lemma::L34,
            "l35" => Lemma::L35,
            "l36" => Lemma::L36,
            "l37" => Lemma::L37,
            "esta" => Lemma::EstA,
            _ => return Err(Error::param("lemma", format!("unknown lemma {s:?}"))),
        })
    }
}

/// Exponents entering the probed estimate; unused ones are ignored.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeParams {
    pub r: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub b: f64,
    pub b1: f64,
    pub b2: f64,
    pub s0: f64,
    pub s1: f64,
}

impl Default for ProbeParams {
    fn default() -> Self {
        Self { r: 2.0, alpha1: 0.25, alpha2: 0.25, b: 0.51, b1: 0.51, b2: 0.51, s0: 1.0, s1: 1.0 }
    }
}

/// Random ensemble and lattice for the probe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Ensemble {
    pub count: usize,
    /// Spatial frequency annulus `k_min <= |xi| <= k_max` at dilation 1.
    pub band: (f64, f64),
    /// Modulation profile width at dilation 1.
    pub width: f64,
    pub seed: u64,
    pub n: usize,
    pub nt: usize,
    pub period: f64,
    pub duration: f64,
}

impl Default for Ensemble {
    fn default() -> Self {
        Self {
            count: 200,
            // |xi| well above 1 so that the inhomogeneous weights are close to homogeneous
            band: (4.0, 12.0),
            width: 4.0,
            seed: 0,
            n: 32,
            nt: 32,
            period: 2.0 * std::f64::consts::PI,
            duration: std::f64::consts::PI,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    pub lemma: Lemma,
    #[serde(default)]
    pub params: ProbeParams,
    #[serde(default)]
    pub ensemble: Ensemble,
    #[serde(default = "default_signs")]
    pub signs: (Sign, Sign),
    /// Band dilations reported in the scan; statistics of the first one head the report.
    #[serde(default = "default_dilations")]
    pub dilations: Vec<f64>,
}

fn default_signs() -> (Sign, Sign) {
    (Sign::Plus, Sign::Plus)
}

fn default_dilations() -> Vec<f64> {
    vec![1.0, 2.0, 4.0]
}

impl ProbeSpec {
    pub fn new(lemma: Lemma, params: ProbeParams) -> Self {
        Self { lemma, params, ensemble: Ensemble::default(), signs: default_signs(), dilations: default_dilations() }
    }
}

/// Lemma hypotheses as `(description, holds)` pairs.
pub fn hypotheses(lemma: Lemma, p: &ProbeParams) -> Vec<(String, bool)> {
    let r = p.r;
    let h = |d: &str, ok: bool| (d.to_string(), ok);
    let sum = p.alpha1 + p.alpha2;
    match lemma {
        Lemma::L31 | Lemma::L32 => vec![
            h("alpha1, alpha2 >= 0", p.alpha1 >= 0.0 && p.alpha2 >= 0.0),
            h("alpha1 + alpha2 >= 1/r", sum >= 1.0 / r),
            h("b > 1/r", p.b > 1.0 / r),
        ],
        Lemma::L34 => vec![
            h("alpha1, alpha2 >= 0", p.alpha1 >= 0.0 && p.alpha2 >= 0.0),
            h("alpha1 + alpha2 > 3/(2r)", sum > 1.5 / r),
            h("b1, b2 > 1/(2r)", p.b1 > 0.5 / r && p.b2 > 0.5 / r),
            h("b1 + b2 > 3/(2r)", p.b1 + p.b2 > 1.5 / r),
        ],
        Lemma::L35 => vec![
            h("alpha1, alpha2, b1, b2 >= 0", p.alpha1.min(p.alpha2).min(p.b1).min(p.b2) >= 0.0),
            h("alpha1 + alpha2 > 2/r", sum > 2.0 / r),
            h("b1 + b2 > 1/r", p.b1 + p.b2 > 1.0 / r),
        ],
        Lemma::L36 => vec![
            h("alpha1, alpha2 >= 0", p.alpha1 >= 0.0 && p.alpha2 >= 0.0),
            h("alpha1 + alpha2 >= 1/r + b", sum >= 1.0 / r + p.b),
            h("b > 1/r", p.b > 1.0 / r),
        ],
        Lemma::L37 => vec![
            h("b > 1/r", p.b > 1.0 / r),
            h("s0 >= 1", p.s0 >= 1.0),
            h("s0 <= s1 + 1", p.s0 <= p.s1 + 1.0),
            h("2 s1 - s0 > 7/(4r) - 1", 2.0 * p.s1 - p.s0 > 1.75 / r - 1.0),
            h("s1 > 13/(8r) - 1/2", p.s1 > 1.625 / r - 0.5),
        ],
        Lemma::EstA => vec![
            h("b > 1/r", p.b > 1.0 / r),
            h("s > 25/(16r) - 1/4", p.s0 > 25.0 / (16.0 * r) - 0.25),
            h("l > 13/(8r) - 1/2", p.s1 > 1.625 / r - 0.5),
            h("s - 1 <= l <= s + 1", p.s0 - 1.0 <= p.s1 && p.s1 <= p.s0 + 1.0),
            h("2l - s > 7/(4r) - 1", 2.0 * p.s1 - p.s0 > 1.75 / r - 1.0),
        ],
    }
}

/// Power of the dilation factor by which the ratio scales when every weight is homogeneous.
pub fn scaling_exponent(lemma: Lemma, p: &ProbeParams) -> f64 {
    let r = p.r;
    match lemma {
        Lemma::L31 | Lemma::L32 => 3.0 / r - p.alpha1 - p.alpha2 - 2.0 * p.b,
        Lemma::L34 | Lemma::L35 => 3.0 / r - p.alpha1 - p.alpha2 - p.b1 - p.b2,
        Lemma::L36 => 3.0 / r - p.alpha1 - p.alpha2 - p.b,
        Lemma::L37 => 6.0 / r - 1.0 - 2.0 * p.s1 - 3.0 * p.b,
        Lemma::EstA => 3.0 / r - p.s1 - 2.0 * p.b,
    }
}

/// Random near-cone wave `u~(tau, xi) = g((tau + sign <xi>)/width) f^(xi)` with Gaussian `g`.
///
/// `f^` has independent Gaussian coefficients on the lattice annulus; the field can be sampled
/// on any lattice at least as fine as the one it was drawn on.
#[derive(Clone, Debug)]
pub struct RandomWave {
    grid: Grid2D,
    duration: f64,
    width: f64,
    sign: Sign,
    coeffs: Vec<Complex64>,
}

impl RandomWave {
    pub fn new(
        grid: Grid2D,
        duration: f64,
        band: (f64, f64),
        width: f64,
        sign: Sign,
        rng: &mut ChaCha8Rng,
    ) -> Result<Self> {
        let f = random_band_field(grid, band.0, band.1, false, rng)?;
        let modes = f.data().iter().filter(|z| z.norm() > 0.0).count();
        if modes < 4 {
            return Err(Error::Resolution(format!("band {band:?} holds {modes} < 4 lattice modes")));
        }
        if !(width > 0.0 && duration > 0.0) {
            return Err(Error::param("width", "width and duration must be positive"));
        }
        Ok(Self { grid, duration, width, sign, coeffs: f.into_data() })
    }

    /// Windowed samples of `m(tau, xi) u~` on an `n2 x n2 x nt2` lattice over the same box.
    pub fn field(&self, n2: usize, nt2: usize, m: impl Fn(f64, f64, f64) -> Complex64) -> Result<SpaceTimeField> {
        let n = self.grid.n();
        let g2 = Grid2D::new(n2, self.grid.period())?;
        if n2 < n {
            return Err(Error::param("n2", "target lattice must be at least as fine"));
        }
        let dt = self.duration / nt2 as f64;
        let dtau = 2.0 * std::f64::consts::PI / self.duration;
        let xi = self.grid.frequencies();
        let mut spec = vec![Complex64::new(0.0, 0.0); nt2 * n2 * n2];
        let s = self.sign.value();
        for l in 0..nt2 {
            let li = if l < nt2 / 2 { l as f64 } else { l as f64 - nt2 as f64 };
            let tau = li * dtau;
            for i in 0..n {
                let i2 = if i < n / 2 { i } else { n2 + i - n };
                for j in 0..n {
                    let c = self.coeffs[i * n + j];
                    if c.norm() == 0.0 {
                        continue;
                    }
                    let j2 = if j < n / 2 { j } else { n2 + j - n };
                    let z = (tau + s * japanese2(xi[i], xi[j])) / self.width;
                    spec[(l * n2 + i2) * n2 + j2] = c * (-0.5 * z * z).exp() * m(tau, xi[i], xi[j]);
                }
            }
        }
        SpaceTimeField::from_continuum_spectrum(g2, nt2, dt, spec)?.windowed(WindowKind::Hann)
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }
}

/// Windowed random wave on the base lattice.
pub fn make_random_wave(
    grid: Grid2D,
    nt: usize,
    duration: f64,
    band: (f64, f64),
    width: f64,
    sign: Sign,
    seed: u64,
) -> Result<SpaceTimeField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    RandomWave::new(grid, duration, band, width, sign, &mut rng)?
        .field(grid.n(), nt, |_, _, _| Complex64::new(1.0, 0.0))
}

fn one(_: f64, _: f64, _: f64) -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn inv_abs(a: f64, b: f64) -> f64 {
    let k = a.hypot(b);
    if k == 0.0 {
        0.0
    } else {
        1.0 / k
    }
}

/// Symbol of `d_index |nabla|^{-power}` (`index` 0 is time).
fn deriv(index: usize, power: i32) -> impl Fn(f64, f64, f64) -> Complex64 {
    move |tau, a, b| {
        let d = match index {
            0 => tau,
            1 => a,
            _ => b,
        };
        Complex64::new(0.0, d * inv_abs(a, b).powi(power))
    }
}

fn sum_fields(parts: Vec<SpaceTimeField>) -> Result<SpaceTimeField> {
    let mut it = parts.into_iter();
    let mut acc = it.next().expect("at least one term");
    for p in it {
        acc = acc.add(&p)?;
    }
    Ok(acc)
}

/// One probe draw: `(lhs, rhs)`.
fn draw(spec: &ProbeSpec, lambda: f64, index: usize) -> Result<(f64, f64)> {
    let e = &spec.ensemble;
    let p = &spec.params;
    let grid = Grid2D::new(e.n, e.period / lambda)?;
    let duration = e.duration / lambda;
    let band = (e.band.0 * lambda, e.band.1 * lambda);
    let width = e.width * lambda;
    let mut rng = ChaCha8Rng::seed_from_u64(e.seed.wrapping_add(index as u64));
    let (s1, s2) = spec.signs;
    let mut wave = |s: Sign| RandomWave::new(grid, duration, band, width, s, &mut rng);
    let (n, nt, r) = (e.n, e.nt, p.r);
    // grids are powers of two, so the quadratic padding rounds up to the cubic one
    let quad = (padded_size(n, 2).next_power_of_two(), padded_size(nt, 2).next_power_of_two());
    let cubic = (padded_size(n, 3).next_power_of_two(), padded_size(nt, 3).next_power_of_two());
    let base = |w: &RandomWave| w.field(n, nt, one);

    match spec.lemma {
        Lemma::L31 | Lemma::L32 => {
            let (u, v) = (wave(s1)?, wave(s2)?);
            let (a, b) = if spec.lemma == Lemma::L31 { (1, 2) } else { (0, 1) };
            let (m, mt) = quad;
            let t1 = u.field(m, mt, deriv(a, 1))?.mul(&v.field(m, mt, deriv(b, 1))?)?;
            let t2 = u.field(m, mt, deriv(b, 1))?.mul(&v.field(m, mt, deriv(a, 1))?)?;
            let lhs = wave_sobolev_norm(&t1.add(&t2.scaled(Complex64::new(-1.0, 0.0)))?, 0.0, 0.0, r)?;
            let rhs = signed_norm(&base(&u)?, p.alpha1, p.b, r, s1)? * signed_norm(&base(&v)?, p.alpha2, p.b, r, s2)?;
            Ok((lhs, rhs))
        }
        Lemma::L34 | Lemma::L35 | Lemma::L36 => {
            let (u, v) = (wave(s1)?, wave(s2)?);
            let (m, mt) = quad;
            let prod = u.field(m, mt, one)?.mul(&v.field(m, mt, one)?)?;
            let (bl, bu, bv) = if spec.lemma == Lemma::L36 { (p.b, p.b, p.b) } else { (0.0, p.b1, p.b2) };
            let lhs = wave_sobolev_norm(&prod, 0.0, bl, r)?;
            let rhs = wave_sobolev_norm(&base(&u)?, p.alpha1, bu, r)? * wave_sobolev_norm(&base(&v)?, p.alpha2, bv, r)?;
            Ok((lhs, rhs))
        }
        Lemma::L37 => {
            let (u, v, w) = (wave(s1)?, wave(s2)?, wave(s1)?);
            let (m, mt) = cubic;
            let prod = u.field(m, mt, one)?.mul(&v.field(m, mt, one)?)?.mul(&w.field(m, mt, one)?)?;
            let lhs = wave_sobolev_norm(&prod, p.s0 - 1.0, 0.0, r)?;
            let rhs = wave_sobolev_norm(&base(&u)?, p.s1, p.b, r)?
                * wave_sobolev_norm(&base(&v)?, p.s1, p.b, r)?
                * wave_sobolev_norm(&base(&w)?, p.s0, p.b, r)?;
            Ok((lhs, rhs))
        }
        Lemma::EstA => {
            let (a1, a2, phi) = (wave(s1)?, wave(s1)?, wave(s2)?);
            let (m, mt) = quad;
            // A0 from the Lorenz relation tau A0~ = xi . A~, dropped on the tau = 0 plane
            let lorenz = |tau: f64, k: f64| if tau == 0.0 { 0.0 } else { k / tau };
            let a0_from =
                |f: &RandomWave, j: usize, mm: usize, mmt: usize, sym: &dyn Fn(f64, f64, f64) -> Complex64| {
                    f.field(mm, mmt, |t, x, y| sym(t, x, y) * lorenz(t, if j == 1 { x } else { y }))
                };
            let lhs_field = {
                let a0 = a0_from(&a1, 1, m, mt, &one)?.add(&a0_from(&a2, 2, m, mt, &one)?)?;
                let terms = vec![
                    a0.mul(&phi.field(m, mt, deriv(0, 0))?)?.scaled(Complex64::new(-1.0, 0.0)),
                    a1.field(m, mt, one)?.mul(&phi.field(m, mt, deriv(1, 0))?)?,
                    a2.field(m, mt, one)?.mul(&phi.field(m, mt, deriv(2, 0))?)?,
                ];
                sum_fields(terms)?
            };
            let lhs = wave_sobolev_norm(&lhs_field, p.s0 - 1.0, 0.0, r)?;
            let a0 = a0_from(&a1, 1, n, nt, &one)?.add(&a0_from(&a2, 2, n, nt, &one)?)?;
            let sum_a = signed_norm(&a0, p.s1, p.b, r, s1)?
                + signed_norm(&base(&a1)?, p.s1, p.b, r, s1)?
                + signed_norm(&base(&a2)?, p.s1, p.b, r, s1)?;
            let jphi = phi.field(n, nt, |_, x, y| Complex64::new(japanese2(x, y), 0.0))?;
            Ok((lhs, sum_a * signed_norm(&jphi, p.s0 - 1.0, p.b, r, s2)?))
        }
    }
}

/// Ratio statistics at one dilation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DilationPoint {
    pub lambda: f64,
    pub max_ratio: f64,
    pub mean: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub lemma: Lemma,
    pub params: ProbeParams,
    /// Always true: the statistics are numerical evidence, not a verification.
    pub heuristic: bool,
    pub in_hypothesis: bool,
    pub violated: Vec<String>,
    /// Homogeneous scaling exponent of the ratio under band dilation.
    pub scaling_exponent: f64,
    pub count: usize,
    pub discarded: usize,
    pub max_ratio: f64,
    pub mean: f64,
    /// Quantiles at 0.5, 0.9 and 0.99.
    pub quantiles: [f64; 3],
    pub argmax_seed: u64,
    pub dilation_scan: Vec<DilationPoint>,
    /// Per-draw ratios at the first dilation, NaN for discarded draws; filled on request.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratios: Option<Vec<f64>>,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let x = q * (sorted.len() - 1) as f64;
    let (lo, hi) = (x.floor() as usize, x.ceil() as usize);
    sorted[lo] + (sorted[hi] - sorted[lo]) * (x - lo as f64)
}

fn run_draws(spec: &ProbeSpec, lambda: f64) -> Result<Vec<Option<f64>>> {
    (0..spec.ensemble.count)
        .into_par_iter()
        .map(|i| {
            let (lhs, rhs) = draw(spec, lambda, i)?;
            Ok(if rhs < MIN_RHS_NORM { None } else { Some(lhs / rhs) })
        })
        .collect()
}

fn validate(spec: &ProbeSpec) -> Result<()> {
    check_r(spec.params.r)?;
    let e = &spec.ensemble;
    if e.count == 0 {
        return Err(Error::param("count", "must be positive"));
    }
    if spec.dilations.is_empty() || spec.dilations.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
        return Err(Error::param("dilations", "must be a nonempty list of positive numbers"));
    }
    let dtau = 2.0 * std::f64::consts::PI / e.duration;
    if 4.0 * e.width < 4.0 * dtau {
        return Err(Error::Resolution(format!(
            "modulation profile of width {} spans fewer than 4 time-frequency points (dtau = {dtau})",
            e.width
        )));
    }
    if e.nt < crate::spectral::MIN_TIME_SAMPLES {
        return Err(Error::TooFewSamples { needed: crate::spectral::MIN_TIME_SAMPLES, got: e.nt });
    }
    Ok(())
}

/// Runs the probe at every dilation in the spec; the headline statistics use the first.
pub fn probe(spec: &ProbeSpec, keep_ratios: bool) -> Result<ProbeReport> {
    validate(spec)?;
    let hyp = hypotheses(spec.lemma, &spec.params);
    let violated: Vec<String> = hyp.iter().filter(|(_, ok)| !ok).map(|(d, _)| d.clone()).collect();
    let mut scan = Vec::with_capacity(spec.dilations.len());
    let mut head = None;
    for (k, &lambda) in spec.dilations.iter().enumerate() {
        let ratios = run_draws(spec, lambda)?;
        let kept: Vec<f64> = ratios.iter().flatten().copied().collect();
        let max_ratio = kept.iter().copied().fold(f64::NAN, f64::max);
        let mean = kept.iter().sum::<f64>() / kept.len() as f64;
        scan.push(DilationPoint { lambda, max_ratio, mean });
        if k == 0 {
            head = Some(ratios);
        }
    }
    let ratios = head.expect("at least one dilation");
    let mut sorted: Vec<f64> = ratios.iter().flatten().copied().collect();
    sorted.sort_by(f64::total_cmp);
    let argmax = ratios
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.map(|x| (i, x)))
        .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a })
        .0;
    Ok(ProbeReport {
        lemma: spec.lemma,
        params: spec.params,
        heuristic: true,
        in_hypothesis: violated.is_empty(),
        violated,
        scaling_exponent: scaling_exponent(spec.lemma, &spec.params),
        count: spec.ensemble.count,
        discarded: ratios.iter().filter(|r| r.is_none()).count(),
        max_ratio: scan[0].max_ratio,
        mean: scan[0].mean,
        quantiles: [quantile(&sorted, 0.5), quantile(&sorted, 0.9), quantile(&sorted, 0.99)],
        argmax_seed: spec.ensemble.seed.wrapping_add(argmax as u64),
        dilation_scan: scan,
        ratios: keep_ratios.then(|| ratios.iter().map(|r| r.unwrap_or(f64::NAN)).collect()),
    })
}

/// Probe of the cubic estimate; identical to [`probe`] with the lemma forced to `L37`.
pub fn probe_cubic(spec: &ProbeSpec, keep_ratios: bool) -> Result<ProbeReport> {
    let spec = ProbeSpec { lemma: Lemma::L37, ..spec.clone() };
    probe(&spec, keep_ratios)
}
