//! Riccati equation Π(X) = −AᵀX − XA − (Cᵀ − XB)(D + Dᵀ)⁻¹(C − BᵀX) = 0.

use nalgebra::DMatrix;
use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::numkernel::{eigenvalues, lyapunov_solve, range_basis, sym, RegionTag, Tolerance};

#[derive(Clone, Debug)]
pub struct AreResult {
    pub x: DMatrix<f64>,
    /// Eigenvalues of A + B(D + Dᵀ)⁻¹(BᵀX − C).
    pub closed_loop: Vec<Complex64>,
    /// Closed-loop spectrum in the closed left half-plane.
    pub stabilizing: bool,
    /// ‖Π(X)‖
    pub residual: f64,
}

pub fn pi_residual(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    c: &DMatrix<f64>,
    r_inv: &DMatrix<f64>,
    x: &DMatrix<f64>,
) -> DMatrix<f64> {
    let k = c - b.transpose() * x;
    -(a.transpose() * x) - x * a - k.transpose() * r_inv * k
}

fn sign_iteration(h: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = h.nrows() as f64;
    let mut s = h.clone();
    for _ in 0..200 {
        let inv = s.clone().try_inverse()?;
        let det = s.determinant().abs();
        let mu = if det > 0.0 && det.is_finite() { det.powf(-1.0 / n) } else { 1.0 };
        let next = (&s * mu + inv / mu) * 0.5;
        let delta = (&next - &s).norm();
        s = next;
        if !s.iter().all(|v| v.is_finite()) {
            return None;
        }
        if delta <= 1e-13 * s.norm() {
            return Some(s);
        }
    }
    None
}

/// Stabilizing solution through the stable invariant subspace of
///
/// ```text
/// H = [[Ā, G], [−Q, −Āᵀ]],  Ā = A − BR⁻¹C,  G = BR⁻¹Bᵀ,  Q = CᵀR⁻¹C,
/// ```
///
/// with R = D + Dᵀ, so that Π(X) = 0 reads ĀᵀX + XĀ + XGX + Q = 0 and the
/// closed loop is Ā + GX. When H has eigenvalues on the axis the sign
/// iteration cannot separate them and damped Newton steps take over.
pub fn are_solve(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    c: &DMatrix<f64>,
    d: &DMatrix<f64>,
    tol: &Tolerance,
) -> Result<AreResult> {
    let nx = a.nrows();
    let r = d + d.transpose();
    if r.clone().cholesky().is_none() {
        return Err(Error::Unsupported("D + Dᵀ is not positive definite".into()));
    }
    let r_inv = r.try_inverse().ok_or_else(|| Error::Numerical("R singular".into()))?;
    let abar = a - b * &r_inv * c;
    let g = b * &r_inv * b.transpose();
    let q = c.transpose() * &r_inv * c;
    let finish = |x: DMatrix<f64>| -> Result<AreResult> {
        let x = sym(&x);
        let res = pi_residual(a, b, c, &r_inv, &x).norm();
        let cl = &abar + &g * &x;
        let closed_loop = eigenvalues(&cl);
        let stabilizing = closed_loop
            .iter()
            .all(|&z| tol.classify(z) != RegionTag::OpenRhp);
        let scale = 1.0 + a.norm() + q.norm() + x.norm();
        if !(res <= tol.residual_tol * scale) {
            return Err(Error::AreInfeasible(format!("residual {res:.3e}")));
        }
        Ok(AreResult {
            x,
            closed_loop,
            stabilizing,
            residual: res,
        })
    };
    if nx == 0 {
        return finish(DMatrix::zeros(0, 0));
    }
    let mut h = DMatrix::zeros(2 * nx, 2 * nx);
    h.view_mut((0, 0), (nx, nx)).copy_from(&abar);
    h.view_mut((0, nx), (nx, nx)).copy_from(&g);
    h.view_mut((nx, 0), (nx, nx)).copy_from(&-&q);
    h.view_mut((nx, nx), (nx, nx)).copy_from(&-abar.transpose());
    let hev = eigenvalues(&h);
    let on_axis = hev.iter().any(|&z| tol.widened().classify(z) == RegionTag::Axis);
    let mut seed = None;
    if !on_axis {
        if let Some(s) = sign_iteration(&h) {
            let eye = DMatrix::<f64>::identity(2 * nx, 2 * nx);
            let basis = range_basis(&((&eye - &s) * 0.5), nx);
            let u1 = basis.view((0, 0), (nx, nx)).into_owned();
            let u2 = basis.view((nx, 0), (nx, nx)).into_owned();
            if let Some(u1i) = u1.try_inverse() {
                let x = u2 * u1i;
                if let Ok(out) = finish(x.clone()) {
                    return Ok(out);
                }
                seed = Some(sym(&x));
            }
        }
    }
    newton(&abar, &g, &q, seed, tol).and_then(finish)
}

/// Newton steps (Ā + GX_k)ᵀX_{k+1} + X_{k+1}(Ā + GX_k) = X_kGX_k − Q with
/// backtracking on the residual.
fn newton(
    abar: &DMatrix<f64>,
    g: &DMatrix<f64>,
    q: &DMatrix<f64>,
    seed: Option<DMatrix<f64>>,
    tol: &Tolerance,
) -> Result<DMatrix<f64>> {
    let nx = abar.nrows();
    let f = |x: &DMatrix<f64>| abar.transpose() * x + x * abar + x * g * x + q;
    let mut starts = Vec::new();
    if let Some(s) = seed {
        starts.push(s);
    }
    starts.push(DMatrix::zeros(nx, nx));
    let mut last_err = Error::AreInfeasible("no Newton start converged".into());
    for mut x in starts {
        let mut fx = f(&x).norm();
        for _ in 0..200 {
            if fx <= 1e-13 * (1.0 + q.norm() + x.norm()) {
                return Ok(x);
            }
            let cl = abar + g * &x;
            let rhs = q - &x * g * &x;
            // lyapunov_solve handles −MᵀY − YM = R; here MᵀY + YM = XGX − Q
            let y = match lyapunov_solve(&cl, &rhs, &Tolerance { residual_tol: 1e-6, ..*tol }) {
                Ok(y) => y,
                Err(e) => {
                    last_err = Error::AreInfeasible(format!("Newton step failed: {e}"));
                    break;
                }
            };
            let step = &y - &x;
            let mut t = 1.0;
            let mut improved = false;
            while t > 1e-4 {
                let cand = &x + &step * t;
                let fc = f(&cand).norm();
                if fc < fx {
                    x = sym(&cand);
                    fx = fc;
                    improved = true;
                    break;
                }
                t *= 0.5;
            }
            if !improved {
                break;
            }
        }
        if fx <= tol.residual_tol * (1.0 + q.norm() + x.norm()) {
            return Ok(x);
        }
    }
    Err(last_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: f64) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, v)
    }

    #[test]
    fn rc_riccati() {
        let out = are_solve(&s(-1.0), &s(1.0), &s(1.0), &s(1.0), &Tolerance::default()).unwrap();
        let r2 = 2f64.sqrt();
        assert!((out.x[(0, 0)] - (3.0 - 2.0 * r2)).abs() < 1e-12);
        assert!((out.closed_loop[0].re + r2).abs() < 1e-10);
        assert!(out.stabilizing && out.residual < 1e-10);
    }

    #[test]
    fn decoupled() {
        let out = are_solve(&s(-1.0), &s(0.0), &s(0.0), &s(1.0), &Tolerance::default()).unwrap();
        assert!(out.x[(0, 0)].abs() < 1e-12);
    }

    #[test]
    fn needs_positive_feedthrough() {
        assert!(matches!(
            are_solve(&s(-1.0), &s(1.0), &s(1.0), &s(0.0), &Tolerance::default()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn axis_hamiltonian_falls_back_to_newton() {
        // G = ξ/(ξ+1): G + G⋆ vanishes at ω = 0 and X = 1 is a double root
        let out = are_solve(&s(-1.0), &s(1.0), &s(-1.0), &s(1.0), &Tolerance::default()).unwrap();
        assert!(out.residual < 1e-6);
        assert!(out.stabilizing);
    }
}
