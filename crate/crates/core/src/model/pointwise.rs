//! Pointwise evaluation of polynomial expressions on a padded grid.

use num_complex::Complex64;

use crate::spectral::{Grid2D, Padder};

/// Samples the band-limited inputs on an `m x m` grid, applies `f` pointwise and projects back.
pub(crate) fn padded_eval<const K: usize>(
    grid: &Grid2D,
    m: usize,
    inputs: [&[Complex64]; K],
    f: impl Fn(&[Complex64; K]) -> Complex64,
) -> Vec<Complex64> {
    let n = grid.n();
    let pad = Padder::new(n, m);
    let bufs = sample(&pad, inputs);
    let mut out = vec![Complex64::new(0.0, 0.0); m * m];
    for (q, o) in out.iter_mut().enumerate() {
        let vals: [Complex64; K] = std::array::from_fn(|c| bufs[c][q]);
        *o = f(&vals);
    }
    let mut res = vec![Complex64::new(0.0, 0.0); n * n];
    pad.unpad(&mut out, &mut res);
    res
}

/// Trapezoidal integral over the torus of `f` evaluated on the `m x m` grid.
/// Exact for polynomials of degree below `2m / n` in the band-limited inputs.
pub(crate) fn padded_integral<const K: usize>(
    grid: &Grid2D,
    m: usize,
    inputs: [&[Complex64]; K],
    f: impl Fn(&[Complex64; K]) -> f64,
) -> f64 {
    let pad = Padder::new(grid.n(), m);
    let bufs = sample(&pad, inputs);
    let mut acc = 0.0;
    for q in 0..m * m {
        let vals: [Complex64; K] = std::array::from_fn(|c| bufs[c][q]);
        acc += f(&vals);
    }
    let h = grid.period() / m as f64;
    acc * h * h
}

fn sample<const K: usize>(pad: &Padder, inputs: [&[Complex64]; K]) -> Vec<Vec<Complex64>> {
    let m = pad.m();
    inputs
        .iter()
        .map(|src| {
            let mut b = vec![Complex64::new(0.0, 0.0); m * m];
            pad.pad_into(src, &mut b);
            b
        })
        .collect()
}

/// `Im(x conj(y))`.
#[inline]
pub(crate) fn im_xcy(x: Complex64, y: Complex64) -> f64 {
    x.im * y.re - x.re * y.im
}
