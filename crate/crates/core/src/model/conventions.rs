//! Sign conventions shared by the model, diagnostics and null-form code.

/// Minkowski metric diagonal `(+, -, -)`.
pub const METRIC: [f64; 3] = [1.0, -1.0, -1.0];

/// `epsilon^{12}` of the spatial Levi-Civita symbol.
pub const EPS12: f64 = 1.0;
