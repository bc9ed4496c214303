//! Integrals of `|eta|^{-p} |xi - eta|^{-q}` over the conics `tau = |eta| +- |xi - eta|`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::quadrature::integrate;
use crate::error::{Error, Result};

/// Relative tolerance of every delta-integral quadrature.
pub const DELTA_RTOL: f64 = 1e-8;

/// Cut point of the `cosh` parametrization; beyond it the integrand is replaced by its
/// exponential asymptote, whose relative error there is below `e^{-MU_CUT}`.
const MU_CUT: f64 = 32.0;

/// Conic selected by the signs of the two cone sheets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `tau = |eta| + |xi - eta|`, an ellipse with foci `0` and `xi`.
    Elliptic,
    /// `tau = |eta| - |xi - eta|`, one hyperbola branch.
    Hyperbolic,
}

impl std::str::FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "elliptic" => Ok(Branch::Elliptic),
            "hyperbolic" => Ok(Branch::Hyperbolic),
            _ => Err(Error::param("branch", format!("unknown branch {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaIntegralSpec {
    pub branch: Branch,
    /// Exponent on `|eta|`.
    pub p: f64,
    /// Exponent on `|xi - eta|`.
    pub q: f64,
    pub tau: f64,
    /// `|xi|`.
    pub xi: f64,
}

impl DeltaIntegralSpec {
    /// Weights `|eta|^{-1-r/2} |xi - eta|^{-r/2}` used for the bilinear null-form estimates.
    pub fn for_r(branch: Branch, r: f64, tau: f64, xi: f64) -> Self {
        Self { branch, p: 1.0 + 0.5 * r, q: 0.5 * r, tau, xi }
    }

    fn validate(&self) -> Result<()> {
        if !(self.p.is_finite() && self.q.is_finite() && self.tau.is_finite() && self.xi >= 0.0) {
            return Err(Error::param("spec", "exponents, tau and |xi| must be finite, |xi| >= 0"));
        }
        match self.branch {
            Branch::Elliptic if self.tau <= self.xi => {
                Err(Error::Degenerate(format!("elliptic branch needs tau > |xi|, got {} <= {}", self.tau, self.xi)))
            }
            Branch::Hyperbolic if self.tau.abs() >= self.xi => Err(Error::Degenerate(format!(
                "hyperbolic branch needs |tau| < |xi|, got {} >= {}",
                self.tau.abs(),
                self.xi
            ))),
            _ => Ok(()),
        }
    }
}

/// `int_{mu0}^inf g(mu) dmu` where `g(mu) ~ lead * e^{-delta mu}` for large `mu`.
fn cosh_tail_integral(g: impl Fn(f64) -> f64, mu0: f64, delta: f64, lead: f64) -> Result<f64> {
    let cut = mu0.max(0.0) + MU_CUT;
    let head = integrate(&g, mu0, cut, DELTA_RTOL)?;
    Ok(head + lead * (-delta * cut).exp() / delta)
}

fn divergence_check(p: f64, q: f64) -> Result<f64> {
    let delta = p + q - 2.0;
    if delta <= 0.0 {
        return Err(Error::Divergence(format!(
            "integrand decays like e^(-({delta}) mu) at infinity: not integrable for p + q = {} <= 2",
            p + q
        )));
    }
    Ok(delta)
}

/// Numerical value of `int delta(tau - |eta| -+ |xi - eta|) |eta|^{-p} |xi - eta|^{-q} d eta`.
pub fn delta_integral(spec: &DeltaIntegralSpec) -> Result<f64> {
    spec.validate()?;
    let DeltaIntegralSpec { p, q, tau, xi, .. } = *spec;
    match spec.branch {
        Branch::Elliptic => {
            let (a, c) = (0.5 * tau, 0.5 * xi);
            if c == 0.0 {
                return Ok(PI * a.powf(1.0 - p - q));
            }
            let b = ((a - c) * (a + c)).sqrt();
            // eccentric parametrization: |eta| = a + c cos(nu), |xi - eta| = a - c cos(nu);
            // cos(nu) = +-(1 - w^2) resolves the peaks at the two vertices
            let near = |w: f64| {
                let w2 = w * w;
                let jac = 2.0 / (2.0 - w2).sqrt();
                (a + c * (1.0 - w2)).powf(1.0 - p) * ((a - c) + c * w2).powf(1.0 - q) * jac
            };
            let far = |w: f64| {
                let w2 = w * w;
                let jac = 2.0 / (2.0 - w2).sqrt();
                ((a - c) + c * w2).powf(1.0 - p) * (a + c * (1.0 - w2)).powf(1.0 - q) * jac
            };
            let w_mid = (1.0 - FRAC_PI_2.cos()).sqrt();
            let v = integrate(near, 0.0, w_mid, DELTA_RTOL)? + integrate(far, 0.0, w_mid, DELTA_RTOL)?;
            Ok(v / b)
        }
        Branch::Hyperbolic => {
            let delta = divergence_check(p, q)?;
            let t = tau / xi;
            let c = 0.5 * xi;
            let g = |mu: f64| {
                let ch = mu.cosh();
                (ch + t).powf(1.0 - p) * (ch - t).powf(1.0 - q)
            };
            let j = cosh_tail_integral(g, 0.0, delta, 2f64.powf(delta))?;
            Ok(2.0 / ((xi - tau) * (xi + tau)).sqrt() * c.powf(2.0 - p - q) * j)
        }
    }
}

/// Power-law model of [`delta_integral`]: `tau^A ||tau| - |xi||^B` on the ellipse,
/// `|xi|^A ||xi| - |tau||^B` on the hyperbola, with exponents built from `max(p', 3/2)`.
pub fn delta_integral_asymptotic(spec: &DeltaIntegralSpec) -> Result<f64> {
    spec.validate()?;
    let DeltaIntegralSpec { p, q, tau, xi, .. } = *spec;
    match spec.branch {
        Branch::Elliptic => {
            let top = p.max(q).max(1.5);
            Ok(tau.powf(top - p - q) * (tau - xi).powf(1.0 - top))
        }
        Branch::Hyperbolic => {
            // the weight carried by the sheet nearest the focus dominates
            let top = if tau >= 0.0 { q } else { p }.max(1.5);
            Ok(xi.powf(top - p - q) * (xi - tau.abs()).powf(1.0 - top))
        }
    }
}

/// `int_2^inf (|xi| x + tau)^{1-p} (|xi| x - tau)^{1-q} (x^2 - 1)^{-1/2} dx`, `|tau| <= |xi|`.
///
/// Converges only for `p + q > 2`; otherwise a divergence error is returned.
pub fn far_hyperbola_integral(tau: f64, xi: f64, p: f64, q: f64) -> Result<f64> {
    if !(xi > 0.0 && tau.abs() <= xi) {
        return Err(Error::Degenerate(format!("needs |tau| <= |xi| with |xi| > 0, got tau={tau}, |xi|={xi}")));
    }
    let delta = divergence_check(p, q)?;
    // x = cosh(mu) absorbs the (x^2 - 1)^{-1/2} factor
    let g = |mu: f64| {
        let x = mu.cosh();
        (xi * x + tau).powf(1.0 - p) * (xi * x - tau).powf(1.0 - q)
    };
    cosh_tail_integral(g, 2f64.acosh(), delta, (0.5 * xi).powf(-delta))
}

/// One point of an elliptic sweep.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SweepPoint {
    pub tau: f64,
    pub xi: f64,
    pub numeric: f64,
    pub asymptotic: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaSweep {
    pub branch: Branch,
    pub r: f64,
    pub points: Vec<SweepPoint>,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// `max_ratio / min_ratio`.
    pub spread: f64,
}

fn geomspace(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    if k == 1 {
        return vec![lo];
    }
    (0..k).map(|i| lo * (hi / lo).powf(i as f64 / (k - 1) as f64)).collect()
}

/// Numeric over asymptotic ratio on a log-spaced grid: `|xi|` in `xi_range`, and
/// `tau/|xi|` in `ratio_range` (elliptic) or `|tau|/|xi|` in it (hyperbolic, needs values < 1).
pub fn delta_sweep(
    branch: Branch,
    r: f64,
    xi_range: (f64, f64),
    ratio_range: (f64, f64),
    k: usize,
) -> Result<DeltaSweep> {
    if k == 0 || xi_range.0 <= 0.0 || ratio_range.0 <= 0.0 {
        return Err(Error::param("sweep", "ranges must be positive and k >= 1"));
    }
    let mut points = Vec::with_capacity(k * k);
    for &xi in &geomspace(xi_range.0, xi_range.1, k) {
        for &t in &geomspace(ratio_range.0, ratio_range.1, k) {
            let spec = DeltaIntegralSpec::for_r(branch, r, t * xi, xi);
            let numeric = delta_integral(&spec)?;
            let asymptotic = delta_integral_asymptotic(&spec)?;
            points.push(SweepPoint { tau: spec.tau, xi, numeric, asymptotic, ratio: numeric / asymptotic });
        }
    }
    let min_ratio = points.iter().map(|p| p.ratio).fold(f64::INFINITY, f64::min);
    let max_ratio = points.iter().map(|p| p.ratio).fold(0.0, f64::max);
    Ok(DeltaSweep { branch, r, points, min_ratio, max_ratio, spread: max_ratio / min_ratio })
}
