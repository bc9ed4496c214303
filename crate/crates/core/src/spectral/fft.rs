//! Plan-cached FFT kernels for square 2-D arrays and stacked space-time arrays.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
    static SCRATCH: RefCell<Vec<Complex64>> = const { RefCell::new(Vec::new()) };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Direction {
    Forward,
    Inverse,
}

fn plan(len: usize, dir: Direction) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        match dir {
            Direction::Forward => p.plan_fft_forward(len),
            Direction::Inverse => p.plan_fft_inverse(len),
        }
    })
}

/// Transforms every contiguous row of length `len` in `data`.
fn rows(data: &mut [Complex64], len: usize, dir: Direction) {
    let fft = plan(len, dir);
    SCRATCH.with(|s| {
        let mut s = s.borrow_mut();
        let need = fft.get_inplace_scratch_len();
        if s.len() < need {
            s.resize(need, Complex64::new(0.0, 0.0));
        }
        fft.process_with_scratch(data, &mut s[..need]);
    });
}

const BLOCK: usize = 32;

pub(crate) fn transpose_square(a: &mut [Complex64], n: usize) {
    for ib in (0..n).step_by(BLOCK) {
        for jb in (ib..n).step_by(BLOCK) {
            for i in ib..(ib + BLOCK).min(n) {
                let j0 = if ib == jb { i + 1 } else { jb };
                for j in j0..(jb + BLOCK).min(n) {
                    a.swap(i * n + j, j * n + i);
                }
            }
        }
    }
}

/// Out-of-place transpose of a `rows x cols` row-major matrix.
pub(crate) fn transpose(src: &[Complex64], dst: &mut [Complex64], nrows: usize, ncols: usize) {
    for ib in (0..nrows).step_by(BLOCK) {
        for jb in (0..ncols).step_by(BLOCK) {
            for i in ib..(ib + BLOCK).min(nrows) {
                for j in jb..(jb + BLOCK).min(ncols) {
                    dst[j * nrows + i] = src[i * ncols + j];
                }
            }
        }
    }
}

/// Unnormalized 2-D transform of an `m x m` row-major array, followed by scaling.
pub(crate) fn fft2(data: &mut [Complex64], m: usize, dir: Direction, scale: f64) {
    debug_assert_eq!(data.len(), m * m);
    rows(data, m, dir);
    transpose_square(data, m);
    rows(data, m, dir);
    transpose_square(data, m);
    if scale != 1.0 {
        for z in data.iter_mut() {
            *z *= scale;
        }
    }
}

/// Unitary 2-D transform (`1/m` on both directions).
pub(crate) fn fft2_unitary(data: &mut [Complex64], m: usize, dir: Direction) {
    fft2(data, m, dir, 1.0 / m as f64);
}

/// Unnormalized transform of an `nt x m x m` array along all three axes, then scaled.
pub(crate) fn fft3(data: &mut [Complex64], nt: usize, m: usize, dir: Direction, scale: f64) {
    let plane = m * m;
    debug_assert_eq!(data.len(), nt * plane);
    for slab in data.chunks_exact_mut(plane) {
        fft2(slab, m, dir, 1.0);
    }
    fft_axis0(data, nt, plane, dir);
    if scale != 1.0 {
        for z in data.iter_mut() {
            *z *= scale;
        }
    }
}

/// Unnormalized transform along the leading axis of an `nt x plane` array.
pub(crate) fn fft_axis0(data: &mut [Complex64], nt: usize, plane: usize, dir: Direction) {
    let mut t = vec![Complex64::new(0.0, 0.0); data.len()];
    transpose(data, &mut t, nt, plane);
    rows(&mut t, nt, dir);
    transpose(&t, data, plane, nt);
}
