//! Exponential-integrator coefficient functions.

use num_complex::Complex64;

/// Below this modulus the functions are summed from their Taylor series.
const SERIES_RADIUS: f64 = 1.0;
const SERIES_TERMS: usize = 30;

/// `phi_k(z) = sum_j z^j / (j + k)!` for `k` in `0..=3`.
pub fn phi(k: usize, z: Complex64) -> Complex64 {
    assert!(k <= 3);
    if z.norm() < SERIES_RADIUS {
        let mut term = Complex64::new(1.0 / factorial(k), 0.0);
        let mut acc = term;
        for j in 1..SERIES_TERMS {
            term *= z / (j + k) as f64;
            acc += term;
        }
        return acc;
    }
    let ez = z.exp();
    let one = Complex64::new(1.0, 0.0);
    match k {
        0 => ez,
        1 => (ez - one) / z,
        2 => (ez - one - z) / (z * z),
        _ => (ez - one - z - 0.5 * z * z) / (z * z * z),
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// Cox-Matthews fourth-order coefficients for `z = L h` (all to be multiplied by `h`
/// except the exponentials).
#[derive(Clone, Copy, Debug)]
pub struct Etdrk4Coeffs {
    pub e: Complex64,
    pub e2: Complex64,
    pub q: Complex64,
    pub f1: Complex64,
    pub f2: Complex64,
    pub f3: Complex64,
}

impl Etdrk4Coeffs {
    pub fn new(z: Complex64) -> Self {
        let (p1, p2, p3) = (phi(1, z), phi(2, z), phi(3, z));
        Self {
            e: z.exp(),
            e2: (0.5 * z).exp(),
            q: 0.5 * phi(1, 0.5 * z),
            f1: p1 - 3.0 * p2 + 4.0 * p3,
            f2: p2 - 2.0 * p3,
            f3: -p2 + 4.0 * p3,
        }
    }
}
