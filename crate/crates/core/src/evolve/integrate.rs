use serde::Serialize;

use super::config::{IntegratorConfig, Scheme};
use super::stepper::{all_finite, from_arrays, to_arrays, Stepper};
use crate::diagnostics::{gauss_residual, lorenz_residual};
use crate::error::{Error, Result};
use crate::model::{split, unsplit, FieldState, PhysParams, RhsOptions};

/// Recorded snapshots of a run.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<FieldState>,
    pub steps: usize,
}

/// Constraint residual above which the initial data is reported as incompatible.
pub const COMPATIBILITY_WARN: f64 = 1e-6;

/// Integrates from `state0` to `cfg.t_final`; `on_snapshot` sees every recorded state.
pub fn integrate(
    state0: &FieldState,
    params: &PhysParams,
    cfg: &IntegratorConfig,
    on_snapshot: impl FnMut(usize, &FieldState) -> Result<()>,
) -> Result<Trajectory> {
    integrate_with(state0, params, cfg, RhsOptions::default(), on_snapshot)
}

pub fn integrate_with(
    state0: &FieldState,
    params: &PhysParams,
    cfg: &IntegratorConfig,
    opts: RhsOptions,
    mut on_snapshot: impl FnMut(usize, &FieldState) -> Result<()>,
) -> Result<Trajectory> {
    let steps = cfg.steps()?;
    let s0 = state0.to_frequency();
    let gauss = gauss_residual(&s0, params)?.l2_norm();
    let lorenz = lorenz_residual(&s0).l2_norm();
    if gauss > COMPATIBILITY_WARN || lorenz > COMPATIBILITY_WARN {
        log::warn!("initial data violates the constraints (Gauss {gauss:.3e}, Lorenz {lorenz:.3e})");
    }
    let grid = s0.grid();
    let mut stepper = Stepper::new(grid, *params, cfg.dt, cfg.scheme, opts);
    let hw0 = split(&s0);
    let t0 = s0.t;
    let mut u = to_arrays(&hw0);
    let mut traj = Trajectory { times: vec![t0], states: vec![s0.clone()], steps };
    on_snapshot(0, &s0)?;
    for k in 1..=steps {
        stepper.step_arrays(&mut u)?;
        let t = t0 + k as f64 * cfg.dt;
        if !all_finite(&u) {
            return Err(Error::BlowUp { step: k, t });
        }
        if k % cfg.snapshot_stride == 0 || k == steps {
            let st = unsplit(&from_arrays(grid, u.clone(), t));
            on_snapshot(k, &st)?;
            traj.times.push(t);
            traj.states.push(st);
        }
    }
    Ok(traj)
}

/// Final state only, without intermediate snapshots.
pub fn evolve_to(
    state0: &FieldState,
    params: &PhysParams,
    dt: f64,
    t_final: f64,
    scheme: Scheme,
) -> Result<FieldState> {
    let steps = IntegratorConfig { dt, t_final, scheme, snapshot_stride: 1 }.steps()?;
    let cfg = IntegratorConfig { dt, t_final, scheme, snapshot_stride: steps.max(1) };
    let traj = integrate(state0, params, &cfg, |_, _| Ok(()))?;
    Ok(traj.states.into_iter().last().unwrap())
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub dts: Vec<f64>,
    /// Relative errors against the reference solution at `min(dts) / 4`.
    pub errors: Vec<f64>,
    /// Least-squares slope of `log error` against `log dt`.
    pub order: f64,
    /// Set when every error is at roundoff level (e.g. purely linear dynamics).
    pub exact: bool,
}

/// Relative error below which a run counts as exact.
pub const EXACT_TOL: f64 = 1e-12;

/// Measures the temporal order by self-convergence against a finer reference run.
pub fn self_convergence_order(
    state0: &FieldState,
    params: &PhysParams,
    dts: &[f64],
    t_final: f64,
    scheme: Scheme,
) -> Result<ConvergenceReport> {
    if dts.len() < 3 {
        return Err(Error::param("dts", "need at least three step sizes"));
    }
    let q = dts[1] / dts[0];
    let geometric = dts.windows(2).all(|w| ((w[1] / w[0]) / q - 1.0).abs() < 1e-9);
    if !(geometric && q > 0.0 && (q - 1.0).abs() > 1e-6) {
        return Err(Error::param("dts", "step sizes must form a non-constant geometric sequence"));
    }
    let dmin = dts.iter().cloned().fold(f64::INFINITY, f64::min);
    let reference = evolve_to(state0, params, dmin / 4.0, t_final, scheme)?;
    let scale = reference.norm().max(f64::MIN_POSITIVE);
    let mut errors = Vec::with_capacity(dts.len());
    for &dt in dts {
        let s = evolve_to(state0, params, dt, t_final, scheme)?;
        errors.push(s.distance(&reference)? / scale);
    }
    let exact = errors.iter().all(|&e| e < EXACT_TOL);
    let order = if exact { f64::NAN } else { log_slope(dts, &errors) };
    Ok(ConvergenceReport { dts: dts.to_vec(), errors, order, exact })
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
