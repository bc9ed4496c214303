use num_complex::Complex64;

use mcsh_core::datagen::{generate_data, random_state, DataSpec};
use mcsh_core::evolve::{
    evolve_to, integrate, integrate_with, self_convergence_order, step, IntegratorConfig, Scheme, Stepper,
};
use mcsh_core::model::{split, unsplit, Component, FieldState, PhysParams, RhsOptions, Sign};
use mcsh_core::spectral::{Grid2D, SpectralField};
use mcsh_core::Error;

fn free() -> PhysParams {
    PhysParams { e: 0.0, kappa: 0.0, v: 0.0 }
}

fn unit() -> PhysParams {
    PhysParams::new(1.0, 1.0, 1.0).unwrap()
}

fn small_bump(n: usize) -> FieldState {
    let g = Grid2D::with_default_period(n).unwrap();
    generate_data(&DataSpec::GaussianBump { amp: 0.1, width: 2.0 }, g, &unit()).unwrap().0
}

#[test]
fn zero_state_stays_zero() {
    let g = Grid2D::with_default_period(16).unwrap();
    let hw = split(&FieldState::zeros(g));
    for scheme in [Scheme::Etdrk4, Scheme::ExpMidpoint] {
        let next = step(&hw, &unit(), 0.1, scheme).unwrap();
        assert!(next.plus.iter().chain(&next.minus).all(|f| f.max_abs() == 0.0));
        assert!((next.t - 0.1).abs() < 1e-15);
    }
    let cfg = IntegratorConfig { dt: 0.05, t_final: 0.5, scheme: Scheme::Etdrk4, snapshot_stride: 2 };
    let traj = integrate(&FieldState::zeros(g), &unit(), &cfg, |_, _| Ok(())).unwrap();
    assert!(traj.states.iter().all(|s| s.norm() == 0.0));
}

#[test]
fn free_flow_is_exact_on_plane_waves() {
    let g = Grid2D::with_default_period(16).unwrap();
    let (x1, x2) = (3.0 * g.dk(), -5.0 * g.dk());
    let w = (1.0 + x1 * x1 + x2 * x2).sqrt();
    let wave = |t: f64| SpectralField::from_fn(g, move |x, y| Complex64::from_polar(1.0, x1 * x + x2 * y - w * t));
    let mut st = FieldState::zeros(g);
    st.values[3] = wave(0.0);
    st.rates[3] = wave(0.0).scaled_complex(Complex64::new(0.0, -w));
    let dt = 0.37;
    for scheme in [Scheme::Etdrk4, Scheme::ExpMidpoint] {
        let mut stepper = Stepper::new(g, free(), dt, scheme, RhsOptions { include_shift: false });
        let mut hw = split(&st);
        for _ in 0..5 {
            hw = stepper.step(&hw).unwrap();
        }
        let out = unsplit(&hw);
        let exact = wave(5.0 * dt);
        assert!(out.phi().to_physical().distance(&exact).unwrap() < 1e-12 * exact.l2_norm(), "{scheme:?}");
        assert!(hw.get(Component::Phi, Sign::Plus).max_abs() < 1e-12);
    }
}

#[test]
fn linear_problem_converges_at_fourth_order_or_exactly() {
    let st = random_state(Grid2D::with_default_period(16).unwrap(), 1.0, 1.0, false, 1).unwrap();
    let rep = self_convergence_order(&st, &free(), &[0.2, 0.1, 0.05], 1.0, Scheme::Etdrk4).unwrap();
    assert!(rep.exact || rep.order >= 3.9, "{rep:?}");
}

#[test]
fn step_halving_gives_fourth_order_differences() {
    let st = small_bump(32);
    let params = unit();
    let a = evolve_to(&st, &params, 0.1, 1.0, Scheme::Etdrk4).unwrap();
    let b = evolve_to(&st, &params, 0.05, 1.0, Scheme::Etdrk4).unwrap();
    let c = evolve_to(&st, &params, 0.025, 1.0, Scheme::Etdrk4).unwrap();
    let (d1, d2) = (a.distance(&b).unwrap(), b.distance(&c).unwrap());
    assert!(d1 / d2 > 12.0, "{d1:e} / {d2:e}");
    assert!(d1 < 1e-3 * st.norm());
}

#[test]
fn midpoint_scheme_is_reversible() {
    let st = small_bump(32);
    let dt = 0.05;
    let mut fwd = Stepper::new(st.grid(), unit(), dt, Scheme::ExpMidpoint, RhsOptions::default());
    let mut bwd = Stepper::new(st.grid(), unit(), -dt, Scheme::ExpMidpoint, RhsOptions::default());
    let hw0 = split(&st);
    let mut hw = hw0.clone();
    for _ in 0..4 {
        hw = fwd.step(&hw).unwrap();
    }
    for _ in 0..4 {
        hw = bwd.step(&hw).unwrap();
    }
    assert!(hw.distance(&hw0).unwrap() < 1e-10 * st.norm());
}

#[test]
fn snapshots_are_uniformly_spaced() {
    let st = small_bump(16);
    let cfg = IntegratorConfig { dt: 0.02, t_final: 0.2, scheme: Scheme::Etdrk4, snapshot_stride: 3 };
    let mut seen = Vec::new();
    let traj = integrate(&st, &unit(), &cfg, |k, _| {
        seen.push(k);
        Ok(())
    })
    .unwrap();
    // the final state is recorded even off the stride
    assert_eq!(seen, vec![0, 3, 6, 9, 10]);
    assert_eq!(traj.steps, 10);
    for (t, k) in traj.times.iter().zip(&seen) {
        assert!((t - 0.02 * *k as f64).abs() < 1e-14);
    }
}

#[test]
fn invalid_configurations_are_rejected() {
    let ok = IntegratorConfig { dt: 0.1, t_final: 1.0, scheme: Scheme::Etdrk4, snapshot_stride: 1 };
    assert_eq!(ok.steps().unwrap(), 10);
    for bad in [
        IntegratorConfig { dt: 0.0, ..ok },
        IntegratorConfig { dt: -0.1, ..ok },
        IntegratorConfig { t_final: 0.05, ..ok },
        IntegratorConfig { t_final: 1.05, ..ok },
        IntegratorConfig { snapshot_stride: 0, ..ok },
    ] {
        assert!(matches!(bad.steps(), Err(Error::InvalidParameter { .. })), "{bad:?}");
    }
    let hw = split(&FieldState::zeros(Grid2D::with_default_period(8).unwrap()));
    assert!(step(&hw, &unit(), -0.1, Scheme::Etdrk4).is_err());
}

#[test]
fn convergence_study_needs_geometric_steps() {
    let st = FieldState::zeros(Grid2D::with_default_period(8).unwrap());
    for dts in [&[0.1, 0.05][..], &[0.1, 0.05, 0.02], &[0.1, 0.1, 0.1]] {
        assert!(self_convergence_order(&st, &free(), dts, 1.0, Scheme::Etdrk4).is_err());
    }
    let rep = self_convergence_order(&st, &free(), &[0.1, 0.05, 0.025], 1.0, Scheme::Etdrk4).unwrap();
    assert!(rep.exact);
}

#[test]
fn huge_data_blows_up() {
    let st = random_state(Grid2D::with_default_period(16).unwrap(), 1e3, 2.0, false, 2).unwrap();
    let cfg = IntegratorConfig { dt: 0.1, t_final: 50.0, scheme: Scheme::Etdrk4, snapshot_stride: 100 };
    let err = integrate_with(&st, &unit(), &cfg, RhsOptions::default(), |_, _| Ok(())).unwrap_err();
    assert!(matches!(err, Error::BlowUp { .. }), "{err:?}");
    assert!(err.is_numerical());
}
