//! Numerical core for the Maxwell-Chern-Simons-Higgs system on the periodic torus.
//!
//! The crate provides a pseudo-spectral discretization in Lorenz gauge, exponential
//! integrators on the half-wave formulation, conservation and constraint diagnostics,
//! Fourier-Lebesgue and wave-Sobolev norms, null-form identities and symbol bounds,
//! and randomized probes of bilinear and trilinear estimates.

pub mod datagen;
pub mod diagnostics;
pub mod error;
pub mod evolve;
pub mod model;
pub mod nullform;
pub mod probe;
pub mod spaces;
pub mod spectral;

pub use error::{Error, Result};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
