//! Storage-function certificates (X, L, W) for state-space systems:
//!
//! ```text
//! X = Xᵀ ⪰ 0,  −AᵀX − XA = LᵀL,  C − BᵀX = WᵀL,  D + Dᵀ = WᵀW.
//! ```
//!
//! `verify_certificate` checks a supplied triple; `construct_certificate`
//! builds one by splitting the observable part into a stable block and a
//! lossless block.

mod are;
mod lchain;
mod spectral;

pub use are::{are_solve, pi_residual, AreResult};
pub use lchain::remark61_solve;
pub use spectral::{
    polynomial_spectral_factor, scalar_spectral_factor, spectral_factor_poly, spectral_factor_ss,
    Factor, SpectralFactor, AXIS_SAMPLES, RHP_SAMPLES,
};

use nalgebra::DMatrix;
use num::complex::Complex64;

use crate::behavior::decompose;
use crate::error::{Error, Result};
use crate::exactalg::to_f64;
use crate::numkernel::{
    complex_nullspace, eigenvalues, hermitian_psd, lossless_lyap_solve, lyapunov_solve,
    smallest_singular, stable_unstable_split, sym, FPolyMat, RegionTag, Tolerance,
};
use crate::polymat::{adjugate, det, PolyMat};
use crate::prpair::{check_pair_with, CheckOptions, PRPairVerdict, Status};
use crate::statespace::{realize_behavior, staircase, StateSpace};
use spectral::{cplx, rational_eval};

/// Frobenius norms of the four defining equations.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Residuals {
    /// ‖X − Xᵀ‖
    pub symmetry: f64,
    /// ‖−AᵀX − XA − LᵀL‖
    pub lyapunov: f64,
    /// ‖C − BᵀX − WᵀL‖
    pub coupling: f64,
    /// ‖D + Dᵀ − WᵀW‖
    pub feedthrough: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.symmetry
            .max(self.lyapunov)
            .max(self.coupling)
            .max(self.feedthrough)
    }
}

/// Checks on Z_X = W + L(ξI − A)⁻¹B.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralCheck {
    /// max over axis samples of ‖Z⋆Z − (G + G⋆)‖ / (1 + ‖G + G⋆‖)
    pub residual: f64,
    pub analytic: bool,
    pub full_row_rank: bool,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub x: DMatrix<f64>,
    pub l: DMatrix<f64>,
    pub w: DMatrix<f64>,
    pub residuals: Residuals,
    /// Smallest eigenvalue of X.
    pub psd_margin: f64,
    pub spectral: SpectralCheck,
    /// Empty for a valid certificate.
    pub violations: Vec<String>,
}

impl Certificate {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn z_at(&self, ss: &StateSpace, lambda: Complex64) -> Option<DMatrix<Complex64>> {
        rational_eval(&self.w, &self.l, &ss.af(), &ss.bf(), lambda)
    }
}

/// No pole of L(ξI − A)⁻¹ in the open right half-plane: L vanishes on every
/// generalized eigenspace of A there.
pub(crate) fn no_rhp_poles(a: &DMatrix<f64>, l: &DMatrix<f64>, tol: &Tolerance) -> bool {
    let d = a.nrows();
    if d == 0 || l.nrows() == 0 {
        return true;
    }
    let ca = cplx(a);
    let cl = cplx(l);
    eigenvalues(a)
        .into_iter()
        .filter(|&z| tol.classify(z) == RegionTag::OpenRhp)
        .all(|z| {
            let shifted = DMatrix::<Complex64>::identity(d, d) * z - &ca;
            let mut p = DMatrix::<Complex64>::identity(d, d);
            for _ in 0..d {
                p = &p * &shifted;
            }
            let v = complex_nullspace(&p, 1e-8);
            (&cl * v).norm() <= 1e-7 * (1.0 + l.norm())
        })
}

/// Evaluates the triple and lists every violated condition.
pub fn evaluate_certificate(
    ss: &StateSpace,
    x: &DMatrix<f64>,
    l: &DMatrix<f64>,
    w: &DMatrix<f64>,
    tol: &Tolerance,
) -> Result<Certificate> {
    let (a, b, c, d) = (ss.af(), ss.bf(), ss.cf(), ss.df());
    let nx = ss.order();
    let n = ss.ports();
    if x.shape() != (nx, nx) || l.ncols() != nx || w.ncols() != n || w.nrows() != l.nrows() {
        return Err(Error::Dimension(format!(
            "X {}x{}, L {}x{}, W {}x{} for d = {nx}, n = {n}",
            x.nrows(),
            x.ncols(),
            l.nrows(),
            l.ncols(),
            w.nrows(),
            w.ncols()
        )));
    }
    let residuals = Residuals {
        symmetry: (x - x.transpose()).norm(),
        lyapunov: (-(a.transpose() * x) - x * &a - l.transpose() * l).norm(),
        coupling: (&c - b.transpose() * x - w.transpose() * l).norm(),
        feedthrough: (&d + d.transpose() - w.transpose() * w).norm(),
    };
    let psd_margin = if nx == 0 {
        0.0
    } else {
        sym(x).symmetric_eigen().eigenvalues.min()
    };
    let g = |lam: Complex64| {
        let gl = ss.transfer(lam)?;
        Some(&gl + gl.adjoint())
    };
    let eigs = eigenvalues(&a);
    let mut residual: f64 = 0.0;
    for &om in &AXIS_SAMPLES {
        let lam = Complex64::new(0.0, om);
        if eigs.iter().any(|e| (e - lam).norm() < 1e-3) {
            continue;
        }
        let (Some(z), Some(h)) = (rational_eval(w, l, &a, &b, lam), g(lam)) else {
            continue;
        };
        residual = residual.max((z.adjoint() * &z - &h).norm() / (1.0 + h.norm()));
    }
    let full_row_rank = RHP_SAMPLES.iter().all(|&(re, im)| {
        match rational_eval(w, l, &a, &b, Complex64::new(re, im)) {
            Some(z) if z.nrows() == 0 => true,
            Some(z) => smallest_singular(&z.adjoint()).0 > tol.residual_tol * (1.0 + z.norm()),
            None => true,
        }
    });
    let spectral = SpectralCheck {
        residual,
        analytic: no_rhp_poles(&a, l, tol),
        full_row_rank,
    };
    let scale = 1.0 + a.norm() + b.norm() + c.norm() + d.norm() + x.norm();
    let bound = tol.residual_tol * scale;
    let mut violations = Vec::new();
    let mut flag = |name: &str, v: f64| {
        if !(v <= bound) {
            violations.push(format!("{name} residual {v:.3e} exceeds {bound:.3e}"));
        }
    };
    flag("symmetry X = Xᵀ", residuals.symmetry);
    flag("-AᵀX - XA = LᵀL", residuals.lyapunov);
    flag("C - BᵀX = WᵀL", residuals.coupling);
    flag("D + Dᵀ = WᵀW", residuals.feedthrough);
    if psd_margin < tol.psd_floor(x.norm()) {
        violations.push(format!("X is not positive semidefinite (min eigenvalue {psd_margin:.3e})"));
    }
    if residual > tol.residual_tol.sqrt() {
        violations.push(format!("Z⋆Z differs from G + G⋆ on the axis by {residual:.3e}"));
    }
    Ok(Certificate {
        x: x.clone(),
        l: l.clone(),
        w: w.clone(),
        residuals,
        psd_margin,
        spectral,
        violations,
    })
}

/// Like [`evaluate_certificate`] but fails on any violation.
pub fn verify_certificate(
    ss: &StateSpace,
    x: &DMatrix<f64>,
    l: &DMatrix<f64>,
    w: &DMatrix<f64>,
    tol: &Tolerance,
) -> Result<Certificate> {
    let cert = evaluate_certificate(ss, x, l, w, tol)?;
    if cert.is_valid() {
        Ok(cert)
    } else {
        Err(Error::VerificationFailed(cert.violations.join("; ")))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CertifyOptions {
    pub tol: Tolerance,
    /// Allow a single Jordan chain per eigenvalue of the stable block.
    pub jordan: bool,
}

/// How the stable block was handled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Scalar spectral factor by root splitting.
    Scalar,
    /// Entrywise factors of a diagonal M⋆N + N⋆M.
    Diagonal,
    /// Stabilizing Riccati solution (D + Dᵀ ≻ 0).
    Riccati,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Scalar => "scalar",
            Route::Diagonal => "diagonal",
            Route::Riccati => "riccati",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub certificate: Certificate,
    pub route: Route,
    /// Dimensions of the stable, lossless and unobservable blocks.
    pub blocks: (usize, usize, usize),
    pub spectral: Option<SpectralFactor>,
    pub are: Option<AreResult>,
}

#[derive(Clone, Debug)]
pub enum CertifyOutcome {
    Certified(Box<Construction>),
    NotPassive(Box<PRPairVerdict>),
}

/// lim_{ξ→∞} K(ξ)M(ξ)⁻¹
fn limit_k_over_m(k: &FPolyMat, m: &PolyMat) -> Result<DMatrix<f64>> {
    let dm = det(m);
    let delta = dm.degree().ok_or_else(|| Error::Numerical("M is singular".into()))?;
    let lc = to_f64(&dm.lead());
    let ka = k.mul(&FPolyMat::from_exact(&adjugate(m)));
    let mut w = DMatrix::zeros(k.rows, m.cols());
    let mut excess: f64 = 0.0;
    let mut size: f64 = 0.0;
    for i in 0..k.rows {
        for j in 0..m.cols() {
            let p = ka.get(i, j);
            w[(i, j)] = p.coeff(delta) / lc;
            size = size.max(p.0.iter().fold(0.0, |acc: f64, v| acc.max(v.abs())));
            for e in p.0.iter().skip(delta + 1) {
                excess = excess.max(e.abs());
            }
        }
    }
    if excess > 1e-8 * (1.0 + size) {
        return Err(Error::Numerical("K·M⁻¹ is not proper".into()));
    }
    Ok(w)
}

fn is_diagonal(h: &PolyMat) -> bool {
    (0..h.rows()).all(|i| (0..h.cols()).all(|j| i == j || h.get(i, j).is_zero()))
}

/// Flips rows of (L, W) so the first significant entry of each row of W
/// (or of L when that row of W vanishes) is positive.
fn normalise_signs(l: &mut DMatrix<f64>, w: &mut DMatrix<f64>) {
    for i in 0..w.nrows() {
        let lead = w
            .row(i)
            .iter()
            .chain(l.row(i).iter())
            .copied()
            .find(|v| v.abs() > 1e-12);
        if lead.is_some_and(|v| v < 0.0) {
            w.row_mut(i).neg_mut();
            l.row_mut(i).neg_mut();
        }
    }
}

struct StablePart {
    x: DMatrix<f64>,
    l: DMatrix<f64>,
    w: DMatrix<f64>,
    route: Route,
    spectral: Option<SpectralFactor>,
    are: Option<AreResult>,
}

fn stable_part(
    ss: &StateSpace,
    a_s: &DMatrix<f64>,
    b_s: &DMatrix<f64>,
    c_s: &DMatrix<f64>,
    opts: &CertifyOptions,
) -> Result<StablePart> {
    let tol = &opts.tol;
    let realized = realize_behavior(ss)?;
    let dec = decompose(&realized.ptil, &realized.qtil)?;
    let psi = &(&dec.m.star() * &dec.n) + &(&dec.n.star() * &dec.m);
    let n = ss.ports();
    if n == 1 || is_diagonal(&psi) {
        let sf = spectral_factor_poly(&psi, tol)?;
        let Factor::Polynomial(k) = &sf.factor else {
            unreachable!("polynomial route returns a polynomial factor")
        };
        let mf = FPolyMat::from_exact(&dec.m);
        let l = remark61_solve(k, &mf, a_s, c_s, opts.jordan, tol)?;
        let x = lyapunov_solve(a_s, &(l.transpose() * &l), tol)?;
        let w = limit_k_over_m(k, &dec.m)?;
        return Ok(StablePart {
            x,
            l,
            w,
            route: if n == 1 { Route::Scalar } else { Route::Diagonal },
            spectral: Some(sf),
            are: None,
        });
    }
    let d = ss.df();
    let r = &d + d.transpose();
    let Some(chol) = r.cholesky() else {
        return Err(Error::Unsupported(
            "matrix spectral factorization beyond sub-cases".into(),
        ));
    };
    let are = are_solve(a_s, b_s, c_s, &d, tol)?;
    let w = chol.l().transpose();
    let wt_inv = w
        .transpose()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("W is singular".into()))?;
    let l = wt_inv * (c_s - b_s.transpose() * &are.x);
    Ok(StablePart {
        x: are.x.clone(),
        l,
        w,
        route: Route::Riccati,
        spectral: None,
        are: Some(are),
    })
}

/// The construction without the positive-real pair gate: staircase form,
/// stable/lossless split of the observable block, lossless Lyapunov
/// solve, stable block through a spectral factor, then assembly of
/// X = T̂ᵀ·diag(X_s, X_u, 0)·T̂. Errors when any stage has no solution.
pub fn certificate_pipeline(ss: &StateSpace, opts: &CertifyOptions) -> Result<Construction> {
    let tol = &opts.tol;
    let st = staircase(ss);
    let (nx, d1) = (ss.order(), st.d1);
    let d2 = nx - d1;
    let split = stable_unstable_split(&st.a11, tol)?;
    let ds = split.ds();
    let du = d1 - ds;
    let bt = &split.t * &st.b1;
    let ct = &st.c1 * &split.t_inv;
    let n = ss.ports();
    let b_s = bt.view((0, 0), (ds, n)).into_owned();
    let b_u = bt.view((ds, 0), (du, n)).into_owned();
    let c_s = ct.view((0, 0), (n, ds)).into_owned();
    let c_u = ct.view((0, ds), (n, du)).into_owned();
    let x_u = lossless_lyap_solve(&split.a_u, &b_u, &c_u, tol)?;
    let sp = stable_part(ss, &split.a_s, &b_s, &c_s, opts)?;
    let q = sp.w.nrows();
    let mut t_hat_left = DMatrix::<f64>::identity(nx, nx);
    t_hat_left.view_mut((0, 0), (d1, d1)).copy_from(&split.t);
    let t_hat = t_hat_left * &st.t;
    let mut x_hat = DMatrix::zeros(nx, nx);
    x_hat.view_mut((0, 0), (ds, ds)).copy_from(&sp.x);
    x_hat.view_mut((ds, ds), (du, du)).copy_from(&x_u);
    let mut l_hat = DMatrix::zeros(q, nx);
    l_hat.view_mut((0, 0), (q, ds)).copy_from(&sp.l);
    let x = sym(&(t_hat.transpose() * x_hat * &t_hat));
    let mut l = l_hat * &t_hat;
    let mut w = sp.w;
    normalise_signs(&mut l, &mut w);
    let certificate = verify_certificate(ss, &x, &l, &w, tol)?;
    Ok(Construction {
        certificate,
        route: sp.route,
        blocks: (ds, du, d2),
        spectral: sp.spectral,
        are: sp.are,
    })
}

/// Certificate for a passive system, or the failing pair verdict of its
/// behavior.
pub fn construct_certificate(ss: &StateSpace, opts: &CertifyOptions) -> Result<CertifyOutcome> {
    let realized = realize_behavior(ss)?;
    let verdict = check_pair_with(
        &realized.ptil,
        &realized.qtil,
        &CheckOptions {
            tol: opts.tol,
            cross_check: false,
        },
    )?;
    match verdict.overall {
        Status::Fail => Ok(CertifyOutcome::NotPassive(Box::new(verdict))),
        Status::Inconclusive => Err(Error::Inconclusive(verdict.notes.join("; "))),
        Status::Pass => Ok(CertifyOutcome::Certified(Box::new(certificate_pipeline(ss, opts)?))),
    }
}

/// Hermitian PSD test of G(jω) + G(jω)ᴴ at the axis samples, used as a
/// quick screen before factorization.
pub fn axis_psd_samples(ss: &StateSpace, tol: &Tolerance) -> Result<bool> {
    for &om in &AXIS_SAMPLES {
        if let Some(g) = ss.transfer(Complex64::new(0.0, om)) {
            if !hermitian_psd(&(&g + g.adjoint()), tol)?.psd {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(a: i64, b: i64, c: i64, d: i64) -> StateSpace {
        StateSpace::from_ints(&[&[a]], &[&[b]], &[&[c]], &[&[d]]).unwrap()
    }

    fn m(v: f64) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, v)
    }

    #[test]
    fn capacitor_certificate_verifies() {
        let ss = scalar(0, 1, 1, 0);
        let c = verify_certificate(&ss, &m(1.0), &DMatrix::zeros(0, 1), &DMatrix::zeros(0, 1), &Tolerance::default())
            .unwrap();
        assert_eq!(c.residuals.max(), 0.0);
    }

    #[test]
    fn rc_certificate_and_wrong_x() {
        let ss = scalar(-1, 1, 1, 1);
        let r2 = 2f64.sqrt();
        let t = Tolerance::default();
        let c = verify_certificate(&ss, &m(3.0 - 2.0 * r2), &m(2.0 - r2), &m(r2), &t).unwrap();
        assert!(c.residuals.max() < 1e-14 && c.spectral.residual < 1e-12);
        assert!(c.spectral.analytic && c.spectral.full_row_rank);
        let bad = verify_certificate(&ss, &m(1.0), &m(2.0 - r2), &m(r2), &t).unwrap_err();
        assert!(matches!(bad, Error::VerificationFailed(s) if s.contains("-AᵀX - XA")));
    }

    #[test]
    fn rc_construction() {
        let ss = scalar(-1, 1, 1, 1);
        let CertifyOutcome::Certified(c) = construct_certificate(&ss, &CertifyOptions::default()).unwrap() else {
            panic!("RC is passive");
        };
        let r2 = 2f64.sqrt();
        let cert = &c.certificate;
        assert!((cert.x[(0, 0)] - (3.0 - 2.0 * r2)).abs() < 1e-10);
        assert!((cert.l[(0, 0)] - (2.0 - r2)).abs() < 1e-10);
        assert!((cert.w[(0, 0)] - r2).abs() < 1e-10);
        assert_eq!(c.route, Route::Scalar);
    }

    #[test]
    fn lossless_construction() {
        let ss = StateSpace::from_ints(&[&[0, 1], &[-1, 0]], &[&[0], &[1]], &[&[0, 1]], &[&[0]]).unwrap();
        let CertifyOutcome::Certified(c) = construct_certificate(&ss, &CertifyOptions::default()).unwrap() else {
            panic!("lossless system is passive");
        };
        assert!((&c.certificate.x - DMatrix::identity(2, 2)).norm() < 1e-10);
        assert_eq!(c.certificate.l.nrows(), 0);
        assert!(c.certificate.residuals.max() < 1e-10);
    }

    #[test]
    fn example23_is_not_passive() {
        let ss = StateSpace::from_ints(
            &[&[0, 0, 1], &[0, 0, 1], &[0, -1, 0]],
            &[&[1], &[0], &[0]],
            &[&[1, 1, 0]],
            &[&[1]],
        )
        .unwrap();
        let out = construct_certificate(&ss, &CertifyOptions::default()).unwrap();
        let CertifyOutcome::NotPassive(v) = out else {
            panic!("Example system must be rejected");
        };
        assert_eq!(v.cond2, Status::Fail);
        assert!(certificate_pipeline(&ss, &CertifyOptions::default()).is_err());
    }

    #[test]
    fn controllable_part_certificate() {
        let ss = scalar(0, 1, 1, 1);
        let CertifyOutcome::Certified(c) = construct_certificate(&ss, &CertifyOptions::default()).unwrap() else {
            panic!("1 + 1/ξ is passive");
        };
        let cert = &c.certificate;
        assert!((cert.x[(0, 0)] - 1.0).abs() < 1e-10);
        assert!((cert.w[(0, 0)] - 2f64.sqrt()).abs() < 1e-10);
        assert_eq!(cert.l.ncols(), 1);
        assert!(cert.l.norm() < 1e-10);
    }
}
