use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mcsh_core::datagen::random_band_field;
use mcsh_core::spaces::SpaceTimeField;
use mcsh_core::spectral::{
    apply_multiplier, dealias_product, fft_forward, window_time, Basis, Grid2D, Multiplier, SpectralField, WindowKind,
};
use mcsh_core::Error;

fn gaussian(g: Grid2D, width: f64) -> SpectralField {
    let c = 0.5 * g.period();
    SpectralField::from_real_fn(g, |x, y| (-((x - c).powi(2) + (y - c).powi(2)) / (width * width)).exp())
}

#[test]
fn forward_transform_matches_direct_summation() {
    let g = Grid2D::new(8, 3.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let vals: Vec<Complex64> =
        (0..64).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let u = SpectralField::from_data(g, Basis::Physical, vals.clone()).unwrap();
    let f = fft_forward(&u).unwrap();
    let n = 8;
    for k1 in 0..n {
        for k2 in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    let ph = -2.0 * PI * ((k1 * i + k2 * j) as f64) / n as f64;
                    acc += vals[i * n + j] * Complex64::from_polar(1.0, ph);
                }
            }
            acc /= n as f64;
            assert!((f.data()[k1 * n + k2] - acc).norm() < 1e-10);
        }
    }
}

#[test]
fn identity_symbol_is_identity() {
    let g = Grid2D::with_default_period(32).unwrap();
    let u = gaussian(g, 3.0);
    let v = apply_multiplier(&u, &Multiplier::japanese(0.0), Basis::Physical).unwrap();
    assert!(v.distance(&u.to_frequency().without_nyquist().to_physical()).unwrap() < 1e-14 * u.l2_norm());
}

fn fd_one_minus_laplacian(u: &SpectralField) -> Vec<f64> {
    let g = u.grid();
    let n = g.n();
    let h = g.spacing();
    let p = u.to_physical();
    let at =
        |i: isize, j: isize| p.data()[(i.rem_euclid(n as isize) as usize) * n + j.rem_euclid(n as isize) as usize].re;
    let mut out = vec![0.0; n * n];
    for i in 0..n as isize {
        for j in 0..n as isize {
            let d2 = |a: [f64; 5]| (-a[0] + 16.0 * a[1] - 30.0 * a[2] + 16.0 * a[3] - a[4]) / (12.0 * h * h);
            let uxx = d2([at(i - 2, j), at(i - 1, j), at(i, j), at(i + 1, j), at(i + 2, j)]);
            let uyy = d2([at(i, j - 2), at(i, j - 1), at(i, j), at(i, j + 1), at(i, j + 2)]);
            out[i as usize * n + j as usize] = at(i, j) - uxx - uyy;
        }
    }
    out
}

#[test]
fn japanese_squared_agrees_with_fourth_order_differences() {
    let mut errs = Vec::new();
    for n in [64, 128, 256] {
        let g = Grid2D::with_default_period(n).unwrap();
        let u = gaussian(g, 3.0);
        let spec = apply_multiplier(&u, &Multiplier::japanese(2.0), Basis::Physical).unwrap();
        let fd = fd_one_minus_laplacian(&u);
        let e = spec.data().iter().zip(&fd).map(|(a, b)| (a.re - b).abs()).fold(0.0, f64::max);
        errs.push(e);
    }
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!(ratio > 12.0 && ratio < 20.0, "error ratio {ratio} for {errs:?}");
    }
}

#[test]
fn inverse_abs_removes_constants() {
    let g = Grid2D::with_default_period(16).unwrap();
    let u = SpectralField::from_real_fn(g, |_, _| 2.5);
    assert_eq!(apply_multiplier(&u, &Multiplier::inverse_abs(), Basis::Physical).unwrap().max_abs(), 0.0);
}

#[test]
fn derivative_of_real_field_is_real() {
    let g = Grid2D::with_default_period(32).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let u = random_band_field(g, 0.0, 100.0, true, &mut rng).unwrap();
    for j in [1, 2] {
        let d = apply_multiplier(&u, &Multiplier::partial(j), Basis::Physical).unwrap();
        assert!(d.imag_part().max_abs() < 1e-12 * d.max_abs());
    }
}

fn wave(g: Grid2D, k: [i64; 2]) -> SpectralField {
    let dk = g.dk();
    SpectralField::from_fn(g, move |x, y| Complex64::from_polar(1.0, dk * (k[0] as f64 * x + k[1] as f64 * y)))
}

#[test]
fn product_of_plane_waves_inside_band_is_exact() {
    let g = Grid2D::with_default_period(16).unwrap();
    let p = dealias_product(&[&wave(g, [2, -3]), &wave(g, [4, 1])], 2).unwrap().to_physical();
    assert!(p.distance(&wave(g, [6, -2])).unwrap() < 1e-12 * p.l2_norm());
}

#[test]
fn product_leaving_band_is_removed() {
    let g = Grid2D::with_default_period(16).unwrap();
    let p = dealias_product(&[&wave(g, [5, 0]), &wave(g, [5, 0])], 2).unwrap();
    assert!(p.max_abs() < 1e-12);
    // a plain pointwise product would alias the mode 10 onto -6
    let naive = wave(g, [5, 0]).mul_pointwise(&wave(g, [5, 0])).unwrap();
    assert!(naive.distance(&wave(g, [-6, 0])).unwrap() < 1e-10);
}

#[test]
fn cubic_product_matches_oversampled_oracle() {
    let n = 16;
    let g = Grid2D::with_default_period(n).unwrap();
    let big = Grid2D::with_default_period(4 * n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let lim = (n / 2 - 1) as i64;
    let mut draw = || -> Vec<([i64; 2], Complex64)> {
        (0..6)
            .map(|_| {
                let k = [rng.gen_range(-lim..=lim), rng.gen_range(-lim..=lim)];
                (k, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            })
            .collect()
    };
    let modes = [draw(), draw(), draw()];
    let eval = |grid: Grid2D, m: &[([i64; 2], Complex64)]| {
        let dk = grid.dk();
        let m = m.to_vec();
        SpectralField::from_fn(grid, move |x, y| {
            m.iter().map(|(k, a)| a * Complex64::from_polar(1.0, dk * (k[0] as f64 * x + k[1] as f64 * y))).sum()
        })
    };
    let small: Vec<SpectralField> = modes.iter().map(|m| eval(g, m)).collect();
    let got = dealias_product(&[&small[0], &small[1], &small[2]], 3).unwrap();
    let oracle: Vec<SpectralField> = modes.iter().map(|m| eval(big, m)).collect();
    let prod = oracle[0].mul_pointwise(&oracle[1]).unwrap().mul_pointwise(&oracle[2]).unwrap().to_frequency();
    let scale = n as f64 / (4 * n) as f64;
    for k1 in -lim..=lim {
        for k2 in -lim..=lim {
            let want = prod.data()[big.mode_index(k1, k2).unwrap()] * scale;
            let have = got.data()[g.mode_index(k1, k2).unwrap()];
            assert!((want - have).norm() < 1e-10, "mode ({k1}, {k2}): {have} vs {want}");
        }
    }
}

#[test]
fn rectangular_window_is_identity() {
    let g = Grid2D::with_default_period(8).unwrap();
    let slices: Vec<SpectralField> = (0..8).map(|j| gaussian(g, 1.0 + j as f64)).collect();
    let (out, info) = window_time(&slices, WindowKind::Rectangular).unwrap();
    assert_eq!(out, slices);
    assert_eq!(info.energy_factor, 1.0);
}

#[test]
fn hann_window_zeroes_endpoints() {
    let g = Grid2D::with_default_period(8).unwrap();
    let slices = vec![SpectralField::from_real_fn(g, |_, _| 1.0); 16];
    let (out, _) = window_time(&slices, WindowKind::Hann).unwrap();
    assert!(out[0].max_abs() < 1e-15 && out[15].max_abs() < 1e-15);
    assert!(out[7].max_abs() > 0.9);
    assert!(matches!(window_time(&slices[..7], WindowKind::Hann), Err(Error::TooFewSamples { .. })));
}

#[test]
fn windowed_spectrum_satisfies_parseval() {
    let g = Grid2D::new(16, 5.0).unwrap();
    let nt = 32;
    let dt = 0.1;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let slices: Vec<SpectralField> =
        (0..nt).map(|_| random_band_field(g, 0.0, 100.0, false, &mut rng).unwrap()).collect();
    let w = WindowKind::Hann.weights(nt);
    let direct: f64 = slices.iter().zip(&w).map(|(s, wj)| wj * wj * s.l2_norm().powi(2)).sum::<f64>() * dt;
    let st = SpaceTimeField::from_slices(&slices, dt).unwrap().windowed(WindowKind::Hann).unwrap();
    let spec = st.continuum_spectrum();
    let measure = g.dk() * g.dk() * st.dtau() / (2.0 * PI).powi(3);
    let freq: f64 = spec.iter().map(|z| z.norm_sqr()).sum::<f64>() * measure;
    assert!((freq / direct - 1.0).abs() < 1e-12, "{freq} vs {direct}");
}
