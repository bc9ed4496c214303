//! Lorenz-gauge field equations, half-wave formulation and constraint-compatible data.

mod compat;
pub mod conventions;
mod params;
pub(crate) mod pointwise;
mod rhs;
mod state;

pub use compat::{make_compatible_data, FreeData, SolveReport, GAUSS_MAX_ITER, GAUSS_TOL};
pub use params::PhysParams;
pub(crate) use rhs::derivative;
pub use rhs::{
    covariant_derivative, curvature, potential_n, potential_phi, rhs_halfwave, rhs_halfwave_with, rhs_second_order,
    rhs_second_order_with, Curvature, RhsEngine, RhsOptions,
};
pub use state::{split, unsplit, Component, FieldState, HalfWaveState, Sign};
