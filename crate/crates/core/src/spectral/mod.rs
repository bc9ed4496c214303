//! Periodic grids, unitary FFTs, Fourier multipliers and dealiased products.

mod dealias;
pub(crate) mod fft;
mod field;
mod grid;
pub(crate) mod multiplier;
mod window;

pub(crate) use dealias::Padder;
pub use dealias::{dealias_product, padded_size};
pub use field::{fft_forward, fft_inverse, Basis, SpectralField};
pub use grid::{japanese, japanese2, Grid2D};
pub use multiplier::{apply_multiplier, Multiplier};
pub use window::{window_time, WindowInfo, WindowKind, MIN_TIME_SAMPLES};
