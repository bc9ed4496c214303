use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mcsh_core::datagen::{random_band_field, random_state};
use mcsh_core::nullform::{
    delta_integral, delta_sweep, df_cf_split, null2_residual, null_form, null_form_smoothed, symbol_bound_ratio,
    symbol_sweep, Branch, DeltaIntegralSpec, Form, Timed,
};
use mcsh_core::spectral::{apply_multiplier, Basis, Grid2D, Multiplier, SpectralField};
use mcsh_core::Error;

fn wave(g: Grid2D, k: [i64; 2]) -> SpectralField {
    let dk = g.dk();
    SpectralField::from_fn(g, move |x, y| Complex64::from_polar(1.0, dk * (k[0] as f64 * x + k[1] as f64 * y)))
}

fn d(u: &SpectralField, j: usize) -> SpectralField {
    apply_multiplier(u, &Multiplier::partial(j), Basis::Frequency).unwrap()
}

#[test]
fn splitting_parts_are_divergence_and_curl_free() {
    let g = Grid2D::with_default_period(32).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let a1 = random_band_field(g, 0.0, 2.0, true, &mut rng).unwrap();
    let a2 = random_band_field(g, 0.0, 2.0, true, &mut rng).unwrap();
    let parts = df_cf_split(&a1, &a2).unwrap();
    let scale = a1.l2_norm() + a2.l2_norm();
    let div = d(&parts.df[0], 1).add(&d(&parts.df[1], 2)).unwrap();
    let curl = d(&parts.cf[1], 1).sub(&d(&parts.cf[0], 2)).unwrap();
    assert!(div.l2_norm() < 1e-13 * scale);
    assert!(curl.l2_norm() < 1e-13 * scale);
    let [b1, b2] = parts.reconstruct().unwrap();
    assert!(b1.distance(&a1.to_frequency().without_nyquist()).unwrap() < 1e-13 * scale);
    assert!(b2.distance(&a2.to_frequency().without_nyquist()).unwrap() < 1e-13 * scale);
}

#[test]
fn smoothed_form_on_plane_waves_is_the_angular_symbol() {
    let g = Grid2D::with_default_period(16).unwrap();
    let (ke, kz) = ([2, 1], [-1, 3]);
    let (eta, zeta) = (ke.map(|k| k as f64 * g.dk()), kz.map(|k| k as f64 * g.dk()));
    let got = null_form_smoothed(Timed::spatial(&wave(g, ke)), Timed::spatial(&wave(g, kz)), 1, 2).unwrap();
    let cross = eta[0] * zeta[1] - eta[1] * zeta[0];
    let factor = -cross / (eta[0].hypot(eta[1]) * zeta[0].hypot(zeta[1]));
    let want = wave(g, [1, 4]).scaled(factor);
    assert!(got.to_physical().distance(&want).unwrap() < 1e-12 * want.l2_norm());
    let swapped = null_form_smoothed(Timed::spatial(&wave(g, kz)), Timed::spatial(&wave(g, ke)), 1, 2).unwrap();
    assert!(swapped.add(&got).unwrap().max_abs() < 1e-12);
}

#[test]
fn time_derivative_enters_the_mixed_form() {
    let g = Grid2D::with_default_period(16).unwrap();
    let u = wave(g, [1, 0]);
    let v = wave(g, [0, 2]);
    let (w1, w2) = (0.7, -1.3);
    let ut = u.scaled_complex(Complex64::new(0.0, -w1));
    let vt = v.scaled_complex(Complex64::new(0.0, -w2));
    // Q01 = u_t d1 v - d1 u v_t, and d1 v = 0 here
    let got = null_form(Timed::new(&u, &ut), Timed::new(&v, &vt), 0, 1).unwrap();
    let k1 = g.dk();
    let want = wave(g, [1, 2]).scaled_complex(-(Complex64::new(0.0, k1) * Complex64::new(0.0, -w2)));
    assert!(got.to_physical().distance(&want).unwrap() < 1e-12 * want.l2_norm());
    assert!(matches!(null_form(Timed::spatial(&u), Timed::spatial(&v), 0, 1), Err(Error::Precondition(_))));
}

#[test]
fn decomposition_identity_needs_the_gauge_condition() {
    let g = Grid2D::with_default_period(32).unwrap();
    let good = random_state(g, 0.5, 1.5, true, 12).unwrap();
    assert!(null2_residual(&good).unwrap() < 1e-12 * good.norm());
    let bad = random_state(g, 0.5, 1.5, false, 12).unwrap();
    assert!(matches!(null2_residual(&bad), Err(Error::Precondition(_))));
}

/// Elliptic delta integral in polar coordinates about the origin: for each direction the
/// conic is hit once, at `rho = (tau^2 - X^2) / (2 (tau - X cos))`.
fn elliptic_oracle(p: f64, q: f64, tau: f64, x: f64) -> f64 {
    let m = 20000;
    let h = 2.0 * PI / m as f64;
    (0..m)
        .map(|i| {
            let c = (i as f64 * h).cos();
            let rho = (tau * tau - x * x) / (2.0 * (tau - x * c));
            let other = tau - rho;
            let jac = 1.0 + (rho - x * c) / other;
            rho.powf(1.0 - p) * other.powf(-q) / jac
        })
        .sum::<f64>()
        * h
}

#[test]
fn elliptic_integral_matches_polar_parametrization() {
    for (p, q, tau, x) in [(1.5, 1.0, 3.0, 1.0), (2.0, 0.5, 5.0, 2.0), (1.0, 1.0, 1.2, 0.3)] {
        let got = delta_integral(&DeltaIntegralSpec { branch: Branch::Elliptic, p, q, tau, xi: x }).unwrap();
        let want = elliptic_oracle(p, q, tau, x);
        assert!((got / want - 1.0).abs() < 1e-7, "p={p} q={q}: {got} vs {want}");
    }
}

#[test]
fn delta_integral_domain_errors() {
    let ell = DeltaIntegralSpec { branch: Branch::Elliptic, p: 1.5, q: 1.0, tau: 1.0, xi: 2.0 };
    assert!(matches!(delta_integral(&ell), Err(Error::Degenerate(_))));
    let hyp = DeltaIntegralSpec { branch: Branch::Hyperbolic, p: 1.5, q: 1.0, tau: 3.0, xi: 2.0 };
    assert!(matches!(delta_integral(&hyp), Err(Error::Degenerate(_))));
    assert!(delta_sweep(Branch::Elliptic, 1.5, (0.0, 1.0), (1.1, 2.0), 3).is_err());
}

#[test]
fn delta_sweep_is_homogeneous_in_scale() {
    // the integral is homogeneous in (tau, xi), as is the power-law model, so every ratio depends
    // only on tau / |xi|
    let sw = delta_sweep(Branch::Elliptic, 1.5, (0.5, 50.0), (1.5, 6.0), 4).unwrap();
    for row in sw.points.chunks(4).skip(1) {
        for (a, b) in row.iter().zip(&sw.points[..4]) {
            assert!((a.ratio / b.ratio - 1.0).abs() < 1e-6, "{a:?} vs {b:?}");
        }
    }
    assert!(sw.spread >= 1.0);
}

#[test]
fn symbol_ratio_at_a_right_angle() {
    // eta = (1, 0), xi - eta = (0, 1): |symbol| = 1 and the elliptic bound is sqrt(sqrt2 (2 - sqrt2))
    let r = symbol_bound_ratio([1.0, 0.0], [1.0, 1.0], Branch::Elliptic, Form::Q12).unwrap();
    let want = 1.0 / (SQRT_2 * (2.0 - SQRT_2)).sqrt();
    assert!((r - want).abs() < 1e-14);
}

#[test]
fn symbol_sweep_is_reproducible() {
    let a = symbol_sweep(Form::Q12, Branch::Hyperbolic, 5000, 3);
    let b = symbol_sweep(Form::Q12, Branch::Hyperbolic, 5000, 3);
    assert_eq!(a.max_ratio.to_bits(), b.max_ratio.to_bits());
    assert_eq!(a.argmax, b.argmax);
    assert!(a.max_ratio.is_finite() && a.max_ratio < 2.0);
}
