use log::warn;

use crate::diagnostics::lorenz_residual;
use crate::error::{Error, Result};
use crate::model::{derivative, FieldState};
use crate::spectral::{apply_multiplier, dealias_product, Basis, Multiplier, SpectralField};

/// Relative Lorenz residual above which the (checked) decomposition identity refuses to run.
pub const LORENZ_TOL: f64 = 1e-10;

/// A field together with its time derivative, for forms with a time index.
#[derive(Clone, Copy, Debug)]
pub struct Timed<'a> {
    pub value: &'a SpectralField,
    pub rate: Option<&'a SpectralField>,
}

impl<'a> Timed<'a> {
    pub fn new(value: &'a SpectralField, rate: &'a SpectralField) -> Self {
        Self { value, rate: Some(rate) }
    }

    /// A field used only with spatial indices.
    pub fn spatial(value: &'a SpectralField) -> Self {
        Self { value, rate: None }
    }

    fn partial(&self, index: usize) -> Result<SpectralField> {
        match index {
            0 => self
                .rate
                .map(SpectralField::to_frequency)
                .ok_or_else(|| Error::Precondition("time index needs a time derivative".into())),
            1 | 2 => Ok(derivative(self.value, index)),
            _ => Err(Error::param("index", format!("{index} is not in 0..=2"))),
        }
    }
}

/// `Q_ab(u, v) = d_a u d_b v - d_b u d_a v`, returned in the frequency basis.
pub fn null_form(u: Timed, v: Timed, alpha: usize, beta: usize) -> Result<SpectralField> {
    u.value.grid().check_same(&v.value.grid())?;
    let (ua, ub) = (u.partial(alpha)?, u.partial(beta)?);
    let (va, vb) = (v.partial(alpha)?, v.partial(beta)?);
    dealias_product(&[&ua, &vb], 2)?.sub(&dealias_product(&[&ub, &va], 2)?)
}

/// `q_ab(u, v) = Q_ab(|nabla|^{-1} u, |nabla|^{-1} v)`; the zero modes of the inputs are dropped.
pub fn null_form_smoothed(u: Timed, v: Timed, alpha: usize, beta: usize) -> Result<SpectralField> {
    let inv = Multiplier::inverse_abs();
    let lift = |f: &SpectralField| -> Result<SpectralField> {
        if f.to_frequency().data()[0].norm() > 1e-12 * f.l2_norm().max(f64::MIN_POSITIVE) {
            warn!("smoothed null form: nonzero mean dropped");
        }
        apply_multiplier(f, &inv, Basis::Frequency)
    };
    let (u0, v0) = (lift(u.value)?, lift(v.value)?);
    let u1 = u.rate.map(lift).transpose()?;
    let v1 = v.rate.map(lift).transpose()?;
    null_form(Timed { value: &u0, rate: u1.as_ref() }, Timed { value: &v0, rate: v1.as_ref() }, alpha, beta)
}

/// Divergence-free, curl-free and smoothing parts of a planar vector field.
#[derive(Clone, Debug)]
pub struct DfCfSplit {
    pub df: [SpectralField; 2],
    pub cf: [SpectralField; 2],
    pub remainder: [SpectralField; 2],
}

impl DfCfSplit {
    /// Sum of the three parts.
    pub fn reconstruct(&self) -> Result<[SpectralField; 2]> {
        Ok([
            self.df[0].add(&self.cf[0])?.add(&self.remainder[0])?,
            self.df[1].add(&self.cf[1])?.add(&self.remainder[1])?,
        ])
    }
}

/// `A_j = A_j^df + A_j^cf + <nabla>^{-2} A_j` with the modified Riesz transforms.
pub fn df_cf_split(a1: &SpectralField, a2: &SpectralField) -> Result<DfCfSplit> {
    a1.grid().check_same(&a2.grid())?;
    let f = Basis::Frequency;
    let (r1, r2) = (Multiplier::riesz(1), Multiplier::riesz(2));
    let curl = apply_multiplier(a2, &r1, f)?.sub(&apply_multiplier(a1, &r2, f)?)?;
    let div = apply_multiplier(a1, &r1, f)?.add(&apply_multiplier(a2, &r2, f)?)?;
    let smooth = Multiplier::japanese(-2.0);
    Ok(DfCfSplit {
        df: [apply_multiplier(&curl, &r2, f)?, apply_multiplier(&curl, &r1, f)?.scaled(-1.0)],
        cf: [apply_multiplier(&div, &r1, f)?.scaled(-1.0), apply_multiplier(&div, &r2, f)?.scaled(-1.0)],
        remainder: [apply_multiplier(a1, &smooth, f)?, apply_multiplier(a2, &smooth, f)?],
    })
}

/// Both sides of the null-structure decomposition of `A^mu d_mu phi`.
#[derive(Clone, Debug)]
pub struct Null2Sides {
    /// `-A0 phi_t + A1 d1 phi + A2 d2 phi`.
    pub lhs: SpectralField,
    /// `-Q12(C, phi) + Q_i0(B_i, phi) - (<nabla>^{-2} A0) phi_t + (<nabla>^{-2} A_j) d_j phi`.
    pub rhs: SpectralField,
}

/// Evaluates both sides of the decomposition without checking the gauge condition.
pub fn null2_sides(state: &FieldState) -> Result<Null2Sides> {
    let s = state.to_frequency();
    let f = Basis::Frequency;
    let smooth = Multiplier::japanese(-2.0);
    let (a0, a1, a2) = (s.a(0), s.a(1), s.a(2));
    let (phi, dphi) = (s.phi(), s.dphi());
    let (d1phi, d2phi) = (derivative(phi, 1), derivative(phi, 2));
    let prod = |x: &SpectralField, y: &SpectralField| dealias_product(&[x, y], 2);

    let lhs = prod(a1, &d1phi)?.add(&prod(a2, &d2phi)?)?.sub(&prod(a0, dphi)?)?;

    let c = apply_multiplier(&derivative(a2, 1).sub(&derivative(a1, 2))?, &smooth, f)?;
    let phi_t = Timed::new(phi, dphi);
    let mut rhs = null_form(Timed::spatial(&c), phi_t, 1, 2)?.scaled(-1.0);
    for i in 1..=2 {
        let b = apply_multiplier(&derivative(a0, i), &smooth, f)?;
        let db = apply_multiplier(&derivative(s.da(0), i), &smooth, f)?;
        rhs = rhs.add(&null_form(Timed::new(&b, &db), phi_t, i, 0)?)?;
    }
    let m0 = apply_multiplier(a0, &smooth, f)?;
    let m1 = apply_multiplier(a1, &smooth, f)?;
    let m2 = apply_multiplier(a2, &smooth, f)?;
    rhs = rhs.sub(&prod(&m0, dphi)?)?.add(&prod(&m1, &d1phi)?)?.add(&prod(&m2, &d2phi)?)?;
    Ok(Null2Sides { lhs, rhs })
}

/// L2 norm of LHS - RHS of the decomposition, without the gauge precondition.
pub fn null2_residual_unchecked(state: &FieldState) -> Result<f64> {
    let sides = null2_sides(state)?;
    sides.lhs.distance(&sides.rhs)
}

/// L2 norm of LHS - RHS; the state must satisfy `d_t A0 = div A` to [`LORENZ_TOL`] relative.
pub fn null2_residual(state: &FieldState) -> Result<f64> {
    let res = lorenz_residual(state).l2_norm();
    let scale = state.da(0).l2_norm().max(1.0);
    if res > LORENZ_TOL * scale {
        return Err(Error::Precondition(format!("Lorenz residual {res:.3e} exceeds tolerance")));
    }
    null2_residual_unchecked(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{random_band_field, random_state};
    use crate::spectral::Grid2D;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn orthogonal_plane_waves() {
        let g = Grid2D::with_default_period(16).unwrap();
        let dk = g.dk();
        let u = SpectralField::from_fn(g, |x, _| Complex64::new(0.0, dk * x).exp());
        let v = SpectralField::from_fn(g, |_, y| Complex64::new(0.0, dk * y).exp());
        let q = null_form_smoothed(Timed::spatial(&u), Timed::spatial(&v), 1, 2).unwrap().to_physical();
        let want = SpectralField::from_fn(g, |x, y| -Complex64::new(0.0, dk * (x + y)).exp());
        assert!(q.distance(&want).unwrap() < 1e-12 * want.l2_norm());
    }

    #[test]
    fn parallel_waves_and_self_pairing_vanish() {
        let g = Grid2D::with_default_period(16).unwrap();
        let dk = g.dk();
        let u = SpectralField::from_fn(g, |x, y| Complex64::new(0.0, dk * (x + y)).exp());
        let v = SpectralField::from_fn(g, |x, y| Complex64::new(0.0, 2.0 * dk * (x + y)).exp());
        let q = null_form_smoothed(Timed::spatial(&u), Timed::spatial(&v), 1, 2).unwrap();
        assert!(q.l2_norm() < 1e-12 * u.l2_norm());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let w = random_band_field(g, 0.0, 1.5, false, &mut rng).unwrap();
        let dw = random_band_field(g, 0.0, 1.5, false, &mut rng).unwrap();
        assert_eq!(null_form(Timed::new(&w, &dw), Timed::new(&w, &dw), 0, 2).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn time_index_needs_rate() {
        let g = Grid2D::with_default_period(8).unwrap();
        let u = SpectralField::zeros(g, Basis::Frequency);
        assert!(matches!(null_form(Timed::spatial(&u), Timed::spatial(&u), 0, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn split_of_gradient_and_rotated_gradient() {
        let g = Grid2D::with_default_period(32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let chi = random_band_field(g, 0.0, 2.0, true, &mut rng).unwrap();
        let (g1, g2) = (derivative(&chi, 1), derivative(&chi, 2));
        let sp = df_cf_split(&g1, &g2).unwrap();
        assert!(sp.df[0].l2_norm() + sp.df[1].l2_norm() < 1e-12 * g1.l2_norm());
        let rot = df_cf_split(&g2, &g1.scaled(-1.0)).unwrap();
        assert!(rot.cf[0].l2_norm() + rot.cf[1].l2_norm() < 1e-12 * g1.l2_norm());
        let back = sp.reconstruct().unwrap();
        assert!(back[0].distance(&g1).unwrap() < 1e-12 * g1.l2_norm());
    }

    #[test]
    fn decomposition_holds_in_lorenz_gauge() {
        let g = Grid2D::with_default_period(32).unwrap();
        let st = random_state(g, 1.0, 2.0, true, 11).unwrap();
        assert!(null2_residual(&st).unwrap() < 1e-10);
        let bad = random_state(g, 1.0, 2.0, false, 11).unwrap();
        assert!(matches!(null2_residual(&bad), Err(Error::Precondition(_))));
        assert!(null2_residual_unchecked(&bad).unwrap() > 1e-2);
        assert_eq!(null2_residual(&FieldState::zeros(g)).unwrap(), 0.0);
    }
}
