//! Exponential time integrators for the half-wave system.

mod config;
mod integrate;
mod phi;
mod stepper;

pub use config::{IntegratorConfig, Scheme};
pub use integrate::{
    evolve_to, integrate, integrate_with, log_slope, self_convergence_order, ConvergenceReport, Trajectory,
    COMPATIBILITY_WARN, EXACT_TOL,
};
pub use phi::{phi, Etdrk4Coeffs};
pub use stepper::{step, Stepper};
