//! Null forms, the divergence/curl splitting and its null-structure identity, symbol bounds,
//! the hyperbolic Leibniz rule, and delta-restricted convolution integrals.

mod delta;
mod forms;
pub mod quadrature;
mod symbols;

pub use delta::{
    delta_integral, delta_integral_asymptotic, delta_sweep, far_hyperbola_integral, Branch, DeltaIntegralSpec,
    DeltaSweep, SweepPoint, DELTA_RTOL,
};
pub use forms::{
    df_cf_split, null2_residual, null2_residual_unchecked, null2_sides, null_form, null_form_smoothed, DfCfSplit,
    Null2Sides, Timed, LORENZ_TOL,
};
pub use symbols::{
    cone_distances, hlr_sweep, hyperbolic_leibniz_check, matching_signs, symbol_bound_ratio, symbol_sweep, Form,
    HlrSlack, HlrSweep, SymbolSweep, Vec2, CHUNK,
};
