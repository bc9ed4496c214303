//! Pointwise null-form symbol bounds and the hyperbolic Leibniz inequality on continuum frequencies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::delta::Branch;
use crate::error::{Error, Result};
use crate::model::Sign;

pub type Vec2 = [f64; 2];

fn norm(v: Vec2) -> f64 {
    v[0].hypot(v[1])
}

fn unit(v: Vec2) -> Vec2 {
    let n = norm(v);
    [v[0] / n, v[1] / n]
}

/// Cone distances `b+ = |eta| + |zeta| - |eta + zeta|` and `b- = |eta + zeta| - ||eta| - |zeta||`,
/// written without cancellation.
pub fn cone_distances(eta: Vec2, zeta: Vec2) -> (f64, f64) {
    let (ne, nz) = (norm(eta), norm(zeta));
    let xi = norm([eta[0] + zeta[0], eta[1] + zeta[1]]);
    if ne == 0.0 || nz == 0.0 {
        return (0.0, xi - (ne - nz).abs());
    }
    let (ue, uz) = (unit(eta), unit(zeta));
    // 1 - cos = |ue - uz|^2 / 2 and 1 + cos = |ue + uz|^2 / 2
    let minus = (ue[0] - uz[0]).powi(2) + (ue[1] - uz[1]).powi(2);
    let plus = (ue[0] + uz[0]).powi(2) + (ue[1] + uz[1]).powi(2);
    let bp = ne * nz * minus / (ne + nz + xi);
    let bm = if xi + (ne - nz).abs() == 0.0 { 0.0 } else { ne * nz * plus / (xi + (ne - nz).abs()) };
    (bp, bm)
}

/// Null form whose symbol is bounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "form")]
pub enum Form {
    /// `q12` at frequencies `(eta, xi - eta)`.
    Q12,
    /// `q0j` for free waves on the cone sheets `tau = signs.0 |eta|`, `signs.1 |xi - eta|`.
    Q0j { j: usize, signs: (Sign, Sign) },
}

/// `|symbol| / bound` at `(eta, xi - eta)` for the given conic branch.
///
/// Both zero gives 0; a zero bound with a nonzero symbol or a zero frequency is degenerate.
pub fn symbol_bound_ratio(eta: Vec2, xi: Vec2, branch: Branch, form: Form) -> Result<f64> {
    let zeta = [xi[0] - eta[0], xi[1] - eta[1]];
    let (ne, nz, nx) = (norm(eta), norm(zeta), norm(xi));
    if ne == 0.0 || nz == 0.0 || (nx == 0.0 && (form == Form::Q12 || branch == Branch::Hyperbolic)) {
        return Err(Error::Degenerate(format!("zero frequency in eta={eta:?}, xi={xi:?}")));
    }
    let (ue, uz) = (unit(eta), unit(zeta));
    let (bp, bm) = cone_distances(eta, zeta);
    let symbol = match form {
        Form::Q12 => (ue[0] * uz[1] - ue[1] * uz[0]).abs(),
        Form::Q0j { j, signs } => {
            if !(j == 1 || j == 2) {
                return Err(Error::param("j", format!("{j} is not a spatial index")));
            }
            (signs.0.value() * uz[j - 1] - signs.1.value() * ue[j - 1]).abs()
        }
    };
    let bound = match (form, branch) {
        (Form::Q12, Branch::Elliptic) => (nx * bp / (ne * nz)).sqrt(),
        (Form::Q0j { .. }, Branch::Elliptic) => (bp / ne.min(nz)).sqrt(),
        (_, Branch::Hyperbolic) => (nx * bm / (ne * nz)).sqrt(),
    };
    if symbol == 0.0 {
        return Ok(0.0);
    }
    if bound == 0.0 {
        return Err(Error::Degenerate(format!("bound vanishes at eta={eta:?}, xi={xi:?} with symbol {symbol:e}")));
    }
    Ok(symbol / bound)
}

/// Sign patterns exercised by the lemma for each conic: equal signs on the ellipse, opposite on the hyperbola.
pub fn matching_signs(branch: Branch) -> [(Sign, Sign); 2] {
    match branch {
        Branch::Elliptic => [(Sign::Plus, Sign::Plus), (Sign::Minus, Sign::Minus)],
        Branch::Hyperbolic => [(Sign::Plus, Sign::Minus), (Sign::Minus, Sign::Plus)],
    }
}

/// Modulation slack of the hyperbolic Leibniz rule with constant 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HlrSlack {
    /// `max(RHS+, RHS-) - LHS`.
    pub slack: f64,
    /// Sign of the cone weight attaining the maximum.
    pub sign: Sign,
}

/// `||rho| - |eta|| + ||tau - rho| - |xi - eta|| + b_{+-}(xi, eta) - ||tau| - |xi||` for the better sign.
pub fn hyperbolic_leibniz_check(tau: f64, rho: f64, xi: Vec2, eta: Vec2) -> HlrSlack {
    let zeta = [xi[0] - eta[0], xi[1] - eta[1]];
    let (ne, nz, nx) = (norm(eta), norm(zeta), norm(xi));
    let lhs = (tau.abs() - nx).abs();
    let base = (rho.abs() - ne).abs() + ((tau - rho).abs() - nz).abs();
    let (bp, bm) = cone_distances(eta, zeta);
    if bp >= bm {
        HlrSlack { slack: base + bp - lhs, sign: Sign::Plus }
    } else {
        HlrSlack { slack: base + bm - lhs, sign: Sign::Minus }
    }
}

/// Samples drawn per rayon task; task `i` uses seed `seed + i`.
pub const CHUNK: usize = 1 << 14;

/// Random frequency vector with log-uniform magnitude in `[1e-3, 1e3]` and uniform direction.
fn draw_vec(rng: &mut ChaCha8Rng) -> Vec2 {
    let mag = 10f64.powf(rng.gen_range(-3.0..3.0));
    let ang = rng.gen_range(0.0..std::f64::consts::TAU);
    [mag * ang.cos(), mag * ang.sin()]
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolSweep {
    pub form: Form,
    pub branch: Branch,
    pub samples: usize,
    /// Samples rejected as degenerate.
    pub degenerate: usize,
    pub max_ratio: f64,
    /// `(eta, xi)` attaining the maximum.
    pub argmax: (Vec2, Vec2),
}

/// Random sweep of [`symbol_bound_ratio`], reduced by maximum.
pub fn symbol_sweep(form: Form, branch: Branch, samples: usize, seed: u64) -> SymbolSweep {
    let chunks = samples.div_ceil(CHUNK);
    let (max_ratio, argmax, degenerate) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(c as u64));
            let count = CHUNK.min(samples - c * CHUNK);
            let mut best = (f64::NEG_INFINITY, ([0.0; 2], [0.0; 2]), 0usize);
            for _ in 0..count {
                let (eta, zeta) = (draw_vec(&mut rng), draw_vec(&mut rng));
                let xi = [eta[0] + zeta[0], eta[1] + zeta[1]];
                match symbol_bound_ratio(eta, xi, branch, form) {
                    Ok(r) if r > best.0 => best = (r, (eta, xi), best.2),
                    Ok(_) => {}
                    Err(_) => best.2 += 1,
                }
            }
            best
        })
        .reduce(
            || (f64::NEG_INFINITY, ([0.0; 2], [0.0; 2]), 0),
            |a, b| {
                let d = a.2 + b.2;
                if b.0 > a.0 {
                    (b.0, b.1, d)
                } else {
                    (a.0, a.1, d)
                }
            },
        );
    SymbolSweep { form, branch, samples, degenerate, max_ratio, argmax }
}

#[derive(Clone, Debug, Serialize)]
pub struct HlrSweep {
    pub samples: usize,
    pub min_slack: f64,
    /// `(tau, rho, xi, eta)` attaining the minimum.
    pub argmin: (f64, f64, Vec2, Vec2),
}

/// Random sweep of [`hyperbolic_leibniz_check`] over configurations with `|xi| + |eta| = 1`,
/// reduced by minimum.
pub fn hlr_sweep(samples: usize, seed: u64) -> HlrSweep {
    let chunks = samples.div_ceil(CHUNK);
    let (min_slack, argmin) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(c as u64));
            let count = CHUNK.min(samples - c * CHUNK);
            let mut best = (f64::INFINITY, (0.0, 0.0, [0.0; 2], [0.0; 2]));
            for k in 0..count {
                let (xi, eta) = (draw_vec(&mut rng), draw_vec(&mut rng));
                // the slack is homogeneous of degree one, so samples are taken at unit scale
                // where the absolute tolerance is meaningful
                let scale = norm(xi) + norm(eta);
                let (xi, eta) = ([xi[0] / scale, xi[1] / scale], [eta[0] / scale, eta[1] / scale]);
                // every fourth sample puts the inputs on the cone, where the weight is tight
                let (tau, rho) = if k % 4 == 0 {
                    let zeta = norm([xi[0] - eta[0], xi[1] - eta[1]]);
                    let (s1, s2) =
                        (if rng.gen::<bool>() { 1.0 } else { -1.0 }, if rng.gen::<bool>() { 1.0 } else { -1.0 });
                    (s1 * norm(eta) + s2 * zeta, s1 * norm(eta))
                } else {
                    (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
                };
                let s = hyperbolic_leibniz_check(tau, rho, xi, eta).slack;
                if s < best.0 {
                    best = (s, (tau, rho, xi, eta));
                }
            }
            best
        })
        .reduce(|| (f64::INFINITY, (0.0, 0.0, [0.0; 2], [0.0; 2])), |a, b| if b.0 < a.0 { b } else { a });
    HlrSweep { samples, min_slack, argmin }
}
