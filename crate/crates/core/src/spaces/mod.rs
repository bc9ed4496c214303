//! Fourier-Lebesgue and wave-Sobolev norms, scaling checks and exponent bookkeeping.

mod admissible;
mod fl;
mod regularity;
mod spacetime;

pub use admissible::{
    admissible, approx, cor13_point, critical_exponent, gap, parse_rational, thresholds, AdmissibilityReport,
    Condition, Rational, Relation, Statement,
};
pub use fl::{edge_fraction, fl_norm, fl_norm_homogeneous, scaling_check, ScalingReport, EDGE_FRACTION_LIMIT};
pub use regularity::{check_r, RegularityParams};
pub use spacetime::{signed_norm, wave_sobolev_norm, SpaceTimeField};
