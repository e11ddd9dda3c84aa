//! Spectral factors Z with Z⋆Z = H for the supported shapes of H.

use nalgebra::DMatrix;
use num::complex::Complex64;

use super::are::{are_solve, AreResult};
use crate::error::{Error, Result};
use crate::exactalg::{sturm_nonneg_on_reals, to_f64, Poly};
use crate::numkernel::{roots, smallest_singular, FPoly, FPolyMat, RegionTag, Tolerance};
use crate::polymat::PolyMat;
use crate::statespace::StateSpace;

/// Axis frequencies used by the factorization residual checks.
pub const AXIS_SAMPLES: [f64; 7] = [0.0, 0.3, 0.9, 1.7, 3.1, 6.5, 14.0];

/// Right half-plane points at which full row rank is sampled.
pub const RHP_SAMPLES: [(f64, f64); 4] = [(0.5, 0.0), (1.0, 1.0), (2.0, -0.5), (0.2, 4.0)];

#[derive(Clone, Debug)]
pub enum Factor {
    /// Polynomial factor K (r×n).
    Polynomial(FPolyMat),
    /// Z = W + L(ξI − A)⁻¹B.
    Rational {
        w: DMatrix<f64>,
        l: DMatrix<f64>,
        a: DMatrix<f64>,
        b: DMatrix<f64>,
    },
}

#[derive(Clone, Debug)]
pub struct SpectralFactor {
    pub factor: Factor,
    /// Row count r = normalrank of H.
    pub rank: usize,
    /// max over axis samples of ‖Z(jω)ᴴZ(jω) − H(jω)‖ / (1 + ‖H(jω)‖)
    pub residual: f64,
    /// Z(λ) keeps full row rank at the sampled right half-plane points.
    pub full_row_rank: bool,
    /// No pole of Z in the open right half-plane.
    pub analytic: bool,
}

impl SpectralFactor {
    pub fn eval(&self, lambda: Complex64) -> Option<DMatrix<Complex64>> {
        match &self.factor {
            Factor::Polynomial(k) => Some(k.eval(lambda)),
            Factor::Rational { w, l, a, b } => rational_eval(w, l, a, b, lambda),
        }
    }
}

pub(crate) fn cplx(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

/// W + L(λI − A)⁻¹B
pub(crate) fn rational_eval(
    w: &DMatrix<f64>,
    l: &DMatrix<f64>,
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    lambda: Complex64,
) -> Option<DMatrix<Complex64>> {
    let d = a.nrows();
    if d == 0 || l.nrows() == 0 {
        return Some(cplx(w));
    }
    let res = DMatrix::<Complex64>::identity(d, d) * lambda - cplx(a);
    let inv = res.try_inverse()?;
    Some(cplx(w) + cplx(l) * inv * cplx(b))
}

/// Closed left half-plane factor of a scalar para-Hermitian polynomial that
/// is nonnegative on the axis. `None` for the zero polynomial.
pub fn scalar_spectral_factor(h: &Poly, tol: &Tolerance) -> Result<Option<FPoly>> {
    if h.is_zero() {
        return Ok(None);
    }
    if h.star() != *h {
        return Err(Error::NotHermitian);
    }
    let (re, _) = h.axis_parts();
    if !sturm_nonneg_on_reals(&re) {
        return Err(Error::NotFactorizable("fails PSD-on-axis premise".into()));
    }
    let deg = h.degree().unwrap_or(0);
    let m = deg / 2;
    let mut kept: Vec<Complex64> = Vec::with_capacity(m);
    if deg > 0 {
        for r in roots(h, tol)?.roots {
            match r.region {
                RegionTag::OpenLhp => kept.extend(std::iter::repeat_n(r.value, r.multiplicity)),
                RegionTag::Axis => {
                    if r.multiplicity % 2 == 1 {
                        return Err(Error::NotFactorizable(
                            "odd-multiplicity root on the imaginary axis".into(),
                        ));
                    }
                    kept.extend(std::iter::repeat_n(r.value, r.multiplicity / 2));
                }
                RegionTag::OpenRhp => {}
            }
        }
    }
    if kept.len() != m {
        return Err(Error::Inconclusive(format!(
            "root split kept {} roots, expected {m}",
            kept.len()
        )));
    }
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let lc2 = to_f64(&h.lead()) * sign;
    if lc2 <= 0.0 {
        return Err(Error::NotFactorizable("leading coefficient has the wrong sign".into()));
    }
    let mut coeffs = vec![Complex64::new(lc2.sqrt(), 0.0)];
    for z in kept {
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * z;
        }
        coeffs = next;
    }
    Ok(Some(FPoly(coeffs.iter().map(|c| c.re).collect())))
}

fn is_diagonal(h: &PolyMat) -> bool {
    (0..h.rows()).all(|i| (0..h.cols()).all(|j| i == j || h.get(i, j).is_zero()))
}

/// Polynomial spectral factor of a scalar or diagonal para-Hermitian H.
pub fn polynomial_spectral_factor(h: &PolyMat, tol: &Tolerance) -> Result<FPolyMat> {
    let n = h.rows();
    if !h.is_square() {
        return Err(Error::Dimension("spectral factor needs a square matrix".into()));
    }
    if n > 1 && !is_diagonal(h) {
        return Err(Error::Unsupported(
            "matrix spectral factorization beyond sub-cases".into(),
        ));
    }
    let mut rows: Vec<(usize, FPoly)> = Vec::new();
    for i in 0..n {
        if let Some(k) = scalar_spectral_factor(h.get(i, i), tol)? {
            rows.push((i, k));
        }
    }
    let mut k = FPolyMat::zeros(rows.len(), n);
    for (r, (i, p)) in rows.into_iter().enumerate() {
        k.set(r, i, p);
    }
    Ok(k)
}

fn axis_residual(
    z: impl Fn(Complex64) -> Option<DMatrix<Complex64>>,
    h: impl Fn(Complex64) -> Option<DMatrix<Complex64>>,
) -> f64 {
    let mut worst: f64 = 0.0;
    for &w in &AXIS_SAMPLES {
        let l = Complex64::new(0.0, w);
        let (Some(zl), Some(hl)) = (z(l), h(l)) else {
            continue;
        };
        let diff = zl.adjoint() * &zl - &hl;
        worst = worst.max(diff.norm() / (1.0 + hl.norm()));
    }
    worst
}

fn rows_full_rank(z: impl Fn(Complex64) -> Option<DMatrix<Complex64>>, tol: &Tolerance) -> bool {
    RHP_SAMPLES.iter().all(|&(re, im)| match z(Complex64::new(re, im)) {
        Some(m) if m.nrows() == 0 => true,
        Some(m) => smallest_singular(&m.adjoint()).0 > tol.residual_tol * (1.0 + m.norm()),
        None => false,
    })
}

/// Spectral factor of a para-Hermitian polynomial matrix (scalar or
/// diagonal).
pub fn spectral_factor_poly(h: &PolyMat, tol: &Tolerance) -> Result<SpectralFactor> {
    let k = polynomial_spectral_factor(h, tol)?;
    let residual = axis_residual(|l| Some(k.eval(l)), |l| Some(h.eval_c64(l)));
    let full_row_rank = rows_full_rank(|l| Some(k.eval(l)), tol);
    let out = SpectralFactor {
        rank: k.rows,
        factor: Factor::Polynomial(k),
        residual,
        full_row_rank,
        analytic: true,
    };
    check(out, tol)
}

/// Spectral factor of G + G⋆ for G = D + C(ξI − A)⁻¹B with D + Dᵀ ≻ 0,
/// through the stabilizing solution of the Riccati equation.
pub fn spectral_factor_ss(ss: &StateSpace, tol: &Tolerance) -> Result<(SpectralFactor, AreResult)> {
    let (a, b, c, d) = (ss.af(), ss.bf(), ss.cf(), ss.df());
    let are = are_solve(&a, &b, &c, &d, tol)?;
    let r = &d + d.transpose();
    let chol = r
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Unsupported("D + Dᵀ is not positive definite".into()))?;
    let w = chol.l().transpose();
    let wt_inv = w
        .transpose()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("W is singular".into()))?;
    let l = wt_inv * (&c - b.transpose() * &are.x);
    let g = |lam: Complex64| {
        let gl = ss.transfer(lam)?;
        Some(&gl + gl.adjoint())
    };
    let zf = |lam: Complex64| rational_eval(&w, &l, &a, &b, lam);
    let residual = axis_residual(zf, g);
    let full_row_rank = rows_full_rank(zf, tol);
    let analytic = super::no_rhp_poles(&a, &l, tol);
    let out = SpectralFactor {
        rank: w.nrows(),
        factor: Factor::Rational { w, l, a, b },
        residual,
        full_row_rank,
        analytic,
    };
    Ok((check(out, tol)?, are))
}

fn check(f: SpectralFactor, tol: &Tolerance) -> Result<SpectralFactor> {
    if f.residual > tol.residual_tol {
        return Err(Error::VerificationFailed(format!(
            "spectral factor residual {:.3e}",
            f.residual
        )));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_examples() {
        let t = Tolerance::default();
        let k = scalar_spectral_factor(&Poly::from_ints(&[4, 0, -2]), &t).unwrap().unwrap();
        let r2 = 2f64.sqrt();
        assert!((k.coeff(0) - 2.0).abs() < 1e-12 && (k.coeff(1) - r2).abs() < 1e-12);
        let k = scalar_spectral_factor(&Poly::from_ints(&[0, 0, -1]), &t).unwrap().unwrap();
        assert!(k.coeff(0).abs() < 1e-12 && (k.coeff(1) - 1.0).abs() < 1e-12);
        assert!(scalar_spectral_factor(&Poly::zero(), &t).unwrap().is_none());
        // ξ² − 1 equals −ω² − 1 on the axis
        assert!(matches!(
            scalar_spectral_factor(&Poly::from_ints(&[-1, 0, 1]), &t),
            Err(Error::NotFactorizable(_))
        ));
    }

    #[test]
    fn factor_residual_and_sign_freedom() {
        let t = Tolerance::default();
        let h = PolyMat::scalar(Poly::from_ints(&[4, 0, -2]));
        let f = spectral_factor_poly(&h, &t).unwrap();
        assert!(f.residual < 1e-12 && f.full_row_rank);
        let z1 = f.eval(Complex64::new(0.0, 1.3)).unwrap();
        let z2 = -&z1;
        assert!(((z2.adjoint() * &z2) - (z1.adjoint() * &z1)).norm() < 1e-12);
    }

    #[test]
    fn diagonal_and_unsupported() {
        let t = Tolerance::default();
        let h = PolyMat::from_ints(&[&[&[1], &[]], &[&[], &[0, 0, -1]]]);
        let f = spectral_factor_poly(&h, &t).unwrap();
        assert_eq!(f.rank, 2);
        let h = PolyMat::from_ints(&[&[&[2], &[1]], &[&[1], &[2]]]);
        assert!(matches!(spectral_factor_poly(&h, &t), Err(Error::Unsupported(_))));
    }

    #[test]
    fn rc_rational_factor() {
        let ss = StateSpace::from_ints(&[&[-1]], &[&[1]], &[&[1]], &[&[1]]).unwrap();
        let (f, are) = spectral_factor_ss(&ss, &Tolerance::default()).unwrap();
        let r2 = 2f64.sqrt();
        assert!((are.x[(0, 0)] - (3.0 - 2.0 * r2)).abs() < 1e-10);
        assert!(f.residual < 1e-10 && f.analytic && f.full_row_rank);
        // Z = (√2ξ + 2)/(ξ + 1)
        let l = Complex64::new(0.3, 0.8);
        let z = f.eval(l).unwrap()[(0, 0)];
        let want = (l * r2 + 2.0) / (l + 1.0);
        assert!((z - want).norm() < 1e-10);
    }
}
