use nalgebra::{DMatrix, Dyn, Schur};
use num::complex::Complex64;

use super::tolerance::{RegionTag, Tolerance};
use crate::error::{Error, Result};

/// Sweeps allowed per dimension before a Schur attempt is abandoned.
const SCHUR_SWEEPS: usize = 400;

/// Fixed orthogonal matrix used to perturb a stagnating QR iteration.
fn rotation(n: usize, k: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| ((1 + i * n + j) as f64 * 0.618_034 * k as f64).sin())
        .qr()
        .q()
}

/// Real Schur form with a bounded iteration count. nalgebra's unbounded
/// variant stalls forever on some companion matrices, so a failed attempt
/// is retried on a few orthogonally similar matrices.
fn bounded_schur(a: &DMatrix<f64>) -> Option<(DMatrix<f64>, Schur<f64, Dyn>)> {
    let n = a.nrows();
    let iters = SCHUR_SWEEPS * n.max(1);
    if let Some(s) = Schur::try_new(a.clone(), f64::EPSILON, iters) {
        return Some((DMatrix::identity(n, n), s));
    }
    (1..=4).find_map(|k| {
        let q = rotation(n, k);
        Schur::try_new(q.transpose() * a * &q, f64::EPSILON, iters).map(|s| (q, s))
    })
}

/// Characteristic polynomial coefficients, lowest degree first
/// (Faddeev–LeVerrier).
fn char_poly(a: &DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for k in 1..=n {
        m = a * &m + DMatrix::identity(n, n) * c[n + 1 - k];
        c[n - k] = -(a * &m).trace() / k as f64;
    }
    c
}

pub fn eigenvalues(a: &DMatrix<f64>) -> Vec<Complex64> {
    if a.nrows() == 0 {
        return Vec::new();
    }
    match bounded_schur(a) {
        Some((_, s)) => s.complex_eigenvalues().iter().copied().collect(),
        None => super::roots::aberth(&char_poly(a)),
    }
}

pub fn sym(x: &DMatrix<f64>) -> DMatrix<f64> {
    (x + x.transpose()) * 0.5
}

/// Orthonormal basis (columns) of the right null space; singular values up
/// to `rel·σ_max` count as zero.
pub fn nullspace(a: &DMatrix<f64>, rel: f64) -> DMatrix<f64> {
    let (m, n) = a.shape();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let mut sq = DMatrix::zeros(m.max(n), n);
    sq.view_mut((0, 0), (m, n)).copy_from(a);
    let svd = sq.svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = rel * smax.max(f64::MIN_POSITIVE);
    let idx: Vec<usize> = (0..n).filter(|&i| svd.singular_values[i] <= cut).collect();
    DMatrix::from_fn(n, idx.len(), |r, c| vt[(idx[c], r)])
}

pub fn numeric_rank(a: &DMatrix<f64>, rel: f64) -> usize {
    a.ncols() - nullspace(a, rel).ncols()
}

/// Orthonormal basis of the column space using a known rank.
pub fn range_basis(a: &DMatrix<f64>, rank: usize) -> DMatrix<f64> {
    let (m, n) = a.shape();
    let mut sq = DMatrix::zeros(m, m.max(n));
    sq.view_mut((0, 0), (m, n)).copy_from(a);
    let u = sq.svd(true, false).u.expect("requested U");
    u.columns(0, rank).into_owned()
}

/// Smallest singular value of a complex matrix and its right singular vector.
pub fn smallest_singular(a: &DMatrix<Complex64>) -> (f64, nalgebra::DVector<Complex64>) {
    let (m, n) = a.shape();
    let mut sq = DMatrix::zeros(m.max(n), n);
    sq.view_mut((0, 0), (m, n)).copy_from(a);
    let svd = sq.svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let k = n - 1;
    let v = vt.row(k).adjoint();
    (svd.singular_values[k], v)
}

/// Orthonormal basis (columns) of the right null space of a complex matrix.
pub fn complex_nullspace(a: &DMatrix<Complex64>, rel: f64) -> DMatrix<Complex64> {
    let (m, n) = a.shape();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let mut sq = DMatrix::zeros(m.max(n), n);
    sq.view_mut((0, 0), (m, n)).copy_from(a);
    let svd = sq.svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = rel * smax.max(1.0);
    let idx: Vec<usize> = (0..n).filter(|&i| svd.singular_values[i] <= cut).collect();
    DMatrix::from_fn(n, idx.len(), |r, c| vt[(idx[c], r)].conj())
}

/// Minimum-norm least-squares solution of a complex system.
pub fn complex_lstsq(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    svd.solve(b, 1e-10 * smax.max(f64::MIN_POSITIVE))
        .map_err(|e| Error::Numerical(e.to_string()))
}

/// Least-squares solution by SVD.
pub fn lstsq(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    svd.solve(b, 1e-12 * smax.max(f64::MIN_POSITIVE))
        .map_err(|e| Error::Numerical(e.to_string()))
}

fn fro(a: &DMatrix<f64>) -> f64 {
    a.norm()
}

/// Solves −AᵀX − XA = Q through the Kronecker form of the operator.
pub fn lyapunov_solve(a: &DMatrix<f64>, q: &DMatrix<f64>, tol: &Tolerance) -> Result<DMatrix<f64>> {
    let d = a.nrows();
    if d == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let ev = eigenvalues(a);
    for &l1 in &ev {
        for &l2 in &ev {
            if (l1 + l2).norm() <= 1e-10 * (1.0 + l1.norm() + l2.norm()) {
                return Err(Error::SingularLyapunov);
            }
        }
    }
    let at = a.transpose();
    let eye = DMatrix::<f64>::identity(d, d);
    let k = -(eye.kronecker(&at) + at.kronecker(&eye));
    let rhs = DMatrix::from_column_slice(d * d, 1, q.as_slice());
    let x = k.lu().solve(&rhs).ok_or(Error::SingularLyapunov)?;
    let x = sym(&DMatrix::from_column_slice(d, d, x.as_slice()));
    let res = fro(&(-(a.transpose() * &x) - &x * a - q));
    if res > tol.residual_tol * (1.0 + fro(q)) {
        return Err(Error::Numerical(format!("Lyapunov residual {res:e}")));
    }
    Ok(x)
}

/// Symmetric X ≻ 0 with AᵀX + XA = 0 and XB = Cᵀ, found as the least-squares
/// solution of the stacked linear system in the free entries of X.
pub fn lossless_lyap_solve(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    c: &DMatrix<f64>,
    tol: &Tolerance,
) -> Result<DMatrix<f64>> {
    let d = a.nrows();
    let n = b.ncols();
    if d == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| (i..d).map(move |j| (i, j))).collect();
    let rows = d * d + d * n;
    let mut m = DMatrix::zeros(rows, pairs.len());
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let mut e = DMatrix::zeros(d, d);
        e[(i, j)] = 1.0;
        e[(j, i)] = 1.0;
        let lyap = a.transpose() * &e + &e * a;
        let eb = &e * b;
        for r in 0..d * d {
            m[(r, k)] = lyap.as_slice()[r];
        }
        for r in 0..d * n {
            m[(d * d + r, k)] = eb.as_slice()[r];
        }
    }
    let ct = c.transpose();
    let mut rhs = DMatrix::zeros(rows, 1);
    for r in 0..d * n {
        rhs[(d * d + r, 0)] = ct.as_slice()[r];
    }
    let sol = lstsq(&m, &rhs)?;
    let mut x = DMatrix::zeros(d, d);
    for (k, &(i, j)) in pairs.iter().enumerate() {
        x[(i, j)] = sol[(k, 0)];
        x[(j, i)] = sol[(k, 0)];
    }
    let res = fro(&(a.transpose() * &x + &x * a)) + fro(&(&x * b - &ct));
    if res > tol.residual_tol * (1.0 + fro(c)) {
        return Err(Error::LosslessInfeasible(format!("residual {res:e}")));
    }
    let min_eig = x.clone().symmetric_eigen().eigenvalues.min();
    if min_eig <= tol.residual_tol * (1.0 + fro(&x)) {
        return Err(Error::LosslessInfeasible(format!(
            "solution is not positive definite (min eigenvalue {min_eig:e})"
        )));
    }
    Ok(x)
}

#[derive(Clone, Debug)]
pub struct PsdCheck {
    pub psd: bool,
    pub min_eigenvalue: f64,
    /// Unit eigenvector of the most negative eigenvalue when not PSD.
    pub witness: Option<nalgebra::DVector<Complex64>>,
}

pub fn hermitian_psd(h: &DMatrix<Complex64>, tol: &Tolerance) -> Result<PsdCheck> {
    let norm = h.norm();
    if (h - h.adjoint()).norm() > tol.residual_tol * (1.0 + norm) {
        return Err(Error::NotHermitian);
    }
    if h.nrows() == 0 {
        return Ok(PsdCheck {
            psd: true,
            min_eigenvalue: 0.0,
            witness: None,
        });
    }
    let hh = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = hh.symmetric_eigen();
    let (k, &min) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty");
    let psd = min >= tol.psd_floor(norm);
    Ok(PsdCheck {
        psd,
        min_eigenvalue: min,
        witness: (!psd).then(|| eig.eigenvectors.column(k).into_owned()),
    })
}

/// Real Schur form A = Z·T·Zᵀ, returned as (Z, T).
pub fn real_schur(a: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let (q, s) = bounded_schur(a).ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let (z, t) = s.unpack();
    Ok((q * z, t))
}

/// Similarity T̃ with T̃·A·T̃⁻¹ = diag(A_s, A_u); spec(A_s) strictly left of
/// the axis band, every other eigenvalue (axis included) in A_u.
#[derive(Clone, Debug)]
pub struct Split {
    pub t: DMatrix<f64>,
    pub t_inv: DMatrix<f64>,
    pub a_s: DMatrix<f64>,
    pub a_u: DMatrix<f64>,
}

impl Split {
    pub fn ds(&self) -> usize {
        self.a_s.nrows()
    }
}

/// Matrix sign function by scaled Newton iteration.
fn matrix_sign(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows() as f64;
    let mut s = a.clone();
    for _ in 0..100 {
        let inv = s
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InconclusiveSplit("sign iteration hit a singular matrix".into()))?;
        let det = s.determinant().abs();
        let mu = if det > 0.0 && det.is_finite() {
            det.powf(-1.0 / n)
        } else {
            1.0
        };
        let next = (&s * mu + inv / mu) * 0.5;
        let delta = (&next - &s).norm();
        s = next;
        if delta <= 1e-13 * s.norm() {
            let inv = s.clone().try_inverse().unwrap_or_else(|| s.clone());
            return Ok((&s + inv) * 0.5);
        }
    }
    Err(Error::InconclusiveSplit("sign iteration did not converge".into()))
}

pub fn stable_unstable_split(a: &DMatrix<f64>, tol: &Tolerance) -> Result<Split> {
    let d = a.nrows();
    let ev = eigenvalues(a);
    let stable: Vec<Complex64> = ev
        .iter()
        .copied()
        .filter(|&z| tol.classify(z) == RegionTag::OpenLhp)
        .collect();
    let ds = stable.len();
    if ds == 0 || ds == d {
        let eye = DMatrix::identity(d, d);
        let (a_s, a_u) = if ds == d {
            (a.clone(), DMatrix::zeros(0, 0))
        } else {
            (DMatrix::zeros(0, 0), a.clone())
        };
        return Ok(Split {
            t: eye.clone(),
            t_inv: eye,
            a_s,
            a_u,
        });
    }
    let max_s = stable.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let min_u = ev
        .iter()
        .filter(|&&z| tol.classify(z) != RegionTag::OpenLhp)
        .map(|z| z.re)
        .fold(f64::INFINITY, f64::min);
    let c = 0.5 * (max_s + min_u);
    let shifted = a - DMatrix::identity(d, d) * c;
    let s = matrix_sign(&shifted)?;
    let eye = DMatrix::<f64>::identity(d, d);
    let ps = (&eye - &s) * 0.5;
    let pu = (&eye + &s) * 0.5;
    let vs = range_basis(&ps, ds);
    let vu = range_basis(&pu, d - ds);
    let mut t_inv = DMatrix::zeros(d, d);
    t_inv.view_mut((0, 0), (d, ds)).copy_from(&vs);
    t_inv.view_mut((0, ds), (d, d - ds)).copy_from(&vu);
    let t = t_inv
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::InconclusiveSplit("invariant subspaces are not complementary".into()))?;
    let at = &t * a * &t_inv;
    let off = at.view((0, ds), (ds, d - ds)).norm() + at.view((ds, 0), (d - ds, ds)).norm();
    if off > tol.residual_tol * (1.0 + a.norm()) {
        return Err(Error::InconclusiveSplit(format!(
            "off-diagonal residual {off:e} after split"
        )));
    }
    Ok(Split {
        a_s: at.view((0, 0), (ds, ds)).into_owned(),
        a_u: at.view((ds, ds), (d - ds, d - ds)).into_owned(),
        t,
        t_inv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(r: usize, c: usize, v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(r, c, v)
    }

    #[test]
    fn lyapunov_examples() {
        let t = Tolerance::default();
        let l = 2.0 - 2f64.sqrt();
        let x = lyapunov_solve(&m(1, 1, &[-1.0]), &m(1, 1, &[l * l]), &t).unwrap();
        assert!((x[(0, 0)] - (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-14);
        let x = lyapunov_solve(&-DMatrix::identity(2, 2), &DMatrix::zeros(2, 2), &t).unwrap();
        assert!(x.norm() < 1e-15);
        let x = lyapunov_solve(&m(2, 2, &[-1.0, 0.0, 0.0, -2.0]), &DMatrix::identity(2, 2), &t).unwrap();
        assert!((x[(0, 0)] - 0.5).abs() < 1e-14 && (x[(1, 1)] - 0.25).abs() < 1e-14);
        assert_eq!(
            lyapunov_solve(&m(2, 2, &[0.0, 1.0, -1.0, 0.0]), &DMatrix::identity(2, 2), &t),
            Err(Error::SingularLyapunov)
        );
    }

    #[test]
    fn lossless_examples() {
        let t = Tolerance::default();
        let a = m(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let b = m(2, 1, &[0.0, 1.0]);
        let x = lossless_lyap_solve(&a, &b, &m(1, 2, &[0.0, 1.0]), &t).unwrap();
        assert!((x - DMatrix::identity(2, 2)).norm() < 1e-12);
        let x = lossless_lyap_solve(&m(1, 1, &[0.0]), &m(1, 1, &[1.0]), &m(1, 1, &[1.0]), &t).unwrap();
        assert!((x[(0, 0)] - 1.0).abs() < 1e-12);
        assert!(matches!(
            lossless_lyap_solve(&a, &b, &m(1, 2, &[0.0, -1.0]), &t),
            Err(Error::LosslessInfeasible(_))
        ));
    }

    #[test]
    fn psd_examples() {
        let t = Tolerance::default();
        let eye = DMatrix::<Complex64>::identity(2, 2);
        assert!(hermitian_psd(&eye, &t).unwrap().psd);
        let c = Complex64::new(1.0, 2.0);
        let h = DMatrix::from_row_slice(2, 2, &[Complex64::new(0.0, 0.0), c, c.conj(), Complex64::new(0.0, 0.0)]);
        let r = hermitian_psd(&h, &t).unwrap();
        assert!(!r.psd);
        assert!((r.min_eigenvalue + c.norm()).abs() < 1e-12);
        let w = r.witness.unwrap();
        let q = (w.adjoint() * &h * &w)[(0, 0)];
        assert!(q.re < 0.0);
        // eigenvector of -|c| is (1, -c̄/|c|)/√2 up to a phase
        let ratio = w[1] / w[0];
        assert!((ratio + c.conj() / c.norm()).norm() < 1e-10);
        let z = Complex64::new(0.0, 0.0);
        let real = DMatrix::from_row_slice(2, 2, &[z, Complex64::new(3.0, 0.0), Complex64::new(3.0, 0.0), z]);
        let w = hermitian_psd(&real, &t).unwrap().witness.unwrap();
        assert!((w[1] / w[0] + 1.0).norm() < 1e-10);
        assert!(hermitian_psd(&DMatrix::zeros(2, 2), &t).unwrap().psd);
        let bad = DMatrix::from_row_slice(2, 2, &[Complex64::new(0.0, 0.0), c, c, Complex64::new(0.0, 0.0)]);
        assert_eq!(hermitian_psd(&bad, &t).unwrap_err(), Error::NotHermitian);
    }

    #[test]
    fn split_examples() {
        let t = Tolerance::default();
        let s = stable_unstable_split(&m(2, 2, &[-1.0, 0.0, 0.0, 2.0]), &t).unwrap();
        assert!((s.a_s[(0, 0)] + 1.0).abs() < 1e-12);
        assert!((s.a_u[(0, 0)] - 2.0).abs() < 1e-12);
        let rot = m(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let s = stable_unstable_split(&rot, &t).unwrap();
        assert_eq!(s.ds(), 0);
        assert_eq!(s.a_u, rot);
        let a = m(3, 3, &[-2.0, 1.0, 0.5, 0.0, 0.0, 1.0, 0.0, -1.0, 0.0]);
        let s = stable_unstable_split(&a, &t).unwrap();
        assert_eq!(s.ds(), 1);
        assert!((s.a_s[(0, 0)] + 2.0).abs() < 1e-10);
        let back = &s.t_inv * {
            let mut blk = DMatrix::zeros(3, 3);
            blk.view_mut((0, 0), (1, 1)).copy_from(&s.a_s);
            blk.view_mut((1, 1), (2, 2)).copy_from(&s.a_u);
            blk
        } * &s.t;
        assert!((back - a).norm() < 1e-10);
    }
}
