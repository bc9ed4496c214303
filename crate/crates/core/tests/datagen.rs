use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mcsh_core::datagen::{generate_data, random_band_field, random_state, DataSpec};
use mcsh_core::diagnostics::{gauss_residual, lorenz_residual};
use mcsh_core::model::{FieldState, PhysParams};
use mcsh_core::spectral::{Grid2D, SpectralField};

fn unit() -> PhysParams {
    PhysParams::new(1.0, 1.0, 1.0).unwrap()
}

fn grid(n: usize) -> Grid2D {
    Grid2D::with_default_period(n).unwrap()
}

#[test]
fn zero_generator_gives_the_vacuum() {
    let (st, rep) = generate_data(&DataSpec::Zero, grid(16), &unit()).unwrap();
    assert_eq!(st.norm(), 0.0);
    assert_eq!(rep.gauss_residual, 0.0);
    assert_eq!(st, FieldState::zeros(grid(16)).to_frequency());
}

#[test]
fn random_band_data_is_reproducible_and_compatible() {
    let spec = DataSpec::RandomBand { amp: 0.05, k_min: 0.0, k_max: 1.0, seed: 17 };
    let (a, rep) = generate_data(&spec, grid(32), &unit()).unwrap();
    let (b, _) = generate_data(&spec, grid(32), &unit()).unwrap();
    assert_eq!(a, b);
    let (c, _) =
        generate_data(&DataSpec::RandomBand { amp: 0.05, k_min: 0.0, k_max: 1.0, seed: 18 }, grid(32), &unit())
            .unwrap();
    assert!(a.distance(&c).unwrap() > 0.0);
    assert!(rep.gauss_residual <= 1e-9);
    assert!(gauss_residual(&a, &unit()).unwrap().l2_norm() <= 1e-9);
    assert!(lorenz_residual(&a).l2_norm() <= 1e-12 * a.norm());
    assert!(a.realness_defect() < 1e-12);
}

#[test]
fn plane_wave_moves_with_its_linear_frequency() {
    let g = grid(16);
    // uncharged, so the scalar is massless and the constraint solve leaves it alone
    let params = PhysParams::new(0.0, 1.0, 1.0).unwrap();
    let k = [2, -3];
    let (st, _) = generate_data(&DataSpec::PlaneWave { amp: 0.2, k }, g, &params).unwrap();
    let (x1, x2) = (k[0] as f64 * g.dk(), k[1] as f64 * g.dk());
    let w = x1.hypot(x2);
    let want = SpectralField::from_fn(g, |x, y| Complex64::from_polar(0.2, x1 * x + x2 * y));
    assert!(st.phi().to_physical().distance(&want).unwrap() < 1e-12);
    let rate = want.scaled_complex(Complex64::new(0.0, -w));
    assert!(st.dphi().to_physical().distance(&rate).unwrap() < 1e-12);
    for bad in [[8, 0], [0, -8], [40, 1]] {
        assert!(generate_data(&DataSpec::PlaneWave { amp: 0.2, k: bad }, g, &params).is_err(), "{bad:?}");
    }
}

#[test]
fn band_fields_respect_the_annulus() {
    let g = grid(32);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (lo, hi) = (0.5, 1.25);
    let u = random_band_field(g, lo, hi, true, &mut rng).unwrap();
    let f = u.to_frequency();
    let xi = g.frequencies();
    let n = g.n();
    for i in 0..n {
        for j in 0..n {
            let k = xi[i].hypot(xi[j]);
            if f.data()[i * n + j].norm() > 1e-14 {
                assert!(k >= lo - 1e-12 && k <= hi + 1e-12);
            }
        }
    }
    assert!(u.imag_part().max_abs() < 1e-12 * u.max_abs());
    assert!(random_band_field(g, 1.0, 0.5, false, &mut rng).is_err());
    assert!(random_band_field(g, 100.0, 200.0, false, &mut rng).is_err());
}

#[test]
fn random_states_can_satisfy_lorenz() {
    let g = grid(16);
    let a = random_state(g, 0.3, 1.0, true, 9).unwrap();
    assert_eq!(a, random_state(g, 0.3, 1.0, true, 9).unwrap());
    assert!(lorenz_residual(&a).l2_norm() < 1e-13);
    let b = random_state(g, 0.3, 1.0, false, 9).unwrap();
    assert!(lorenz_residual(&b).l2_norm() > 1e-3);
    assert!((a.phi().to_physical().max_abs() - 0.3).abs() < 1e-12);
}

#[test]
fn data_specs_deserialize_with_defaults() {
    let spec: DataSpec = serde_json::from_str(r#"{"generator": "gaussian-bump"}"#).unwrap();
    assert_eq!(spec, DataSpec::default());
    let spec: DataSpec = serde_json::from_str(r#"{"generator": "plane-wave", "k": [1, 2]}"#).unwrap();
    assert_eq!(spec, DataSpec::PlaneWave { amp: 0.1, k: [1, 2] });
    let spec: DataSpec = serde_json::from_str(r#"{"generator": "random-band", "k_min": 0, "k_max": 2}"#).unwrap();
    assert_eq!(spec, DataSpec::RandomBand { amp: 0.1, k_min: 0.0, k_max: 2.0, seed: 0 });
    for bad in [r#"{"generator": "gaussian-bump", "sigma": 1}"#, r#"{"generator": "nope"}"#, r#"{"amp": 1}"#] {
        assert!(serde_json::from_str::<DataSpec>(bad).is_err(), "{bad}");
    }
    let back: DataSpec = serde_json::from_str(&serde_json::to_string(&DataSpec::Zero).unwrap()).unwrap();
    assert_eq!(back, DataSpec::Zero);
}

#[test]
fn invalid_bump_width_is_rejected() {
    assert!(generate_data(&DataSpec::GaussianBump { amp: 0.1, width: 0.0 }, grid(16), &unit()).is_err());
}
