//! The linear system for L from the eigenstructure of the stable block:
//! for each Jordan chain v_1, …, v_N of A_s at λ and k = 1, …, N,
//!
//! ```text
//! Σ_{j=0}^{k−1} ( K⋆_{λ,j} L v_{k−j} − M⋆_{λ,j} C_s v_{k−j} ) = 0
//! ```
//!
//! where H_{λ,j} is the j-th Taylor coefficient of H at λ.

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;

use super::spectral::cplx;
use crate::error::{Error, Result};
use crate::numkernel::{complex_lstsq, complex_nullspace, eigenvalues, lstsq, FPolyMat, Tolerance};

/// Eigenvalues grouped by proximity, with algebraic multiplicities.
fn clusters(ev: &[Complex64]) -> Vec<(Complex64, usize)> {
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    let mut sorted = ev.to_vec();
    sorted.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    for z in sorted {
        match out
            .iter_mut()
            .find(|(c, _)| (*c - z).norm() <= 1e-5 * (1.0 + z.norm()))
        {
            Some((c, m)) => {
                *c = (*c * (*m as f64) + z) / ((*m + 1) as f64);
                *m += 1;
            }
            None => out.push((z, 1)),
        }
    }
    out
}

fn chains(
    a_s: &DMatrix<f64>,
    lambda: Complex64,
    mult: usize,
    jordan: bool,
) -> Result<Vec<Vec<DVector<Complex64>>>> {
    let d = a_s.nrows();
    let pencil = DMatrix::<Complex64>::identity(d, d) * lambda - cplx(a_s);
    let null = complex_nullspace(&pencil, 1e-7);
    let g = null.ncols();
    if g == mult {
        return Ok((0..g).map(|k| vec![null.column(k).into_owned()]).collect());
    }
    if !jordan {
        return Err(Error::Unsupported(format!(
            "A_s has a Jordan block at {lambda:.6}; enable Jordan chains"
        )));
    }
    if g != 1 {
        return Err(Error::Unsupported(format!(
            "mixed Jordan structure at {lambda:.6}"
        )));
    }
    let mut chain = vec![null.column(0).into_owned()];
    for _ in 1..mult {
        let prev = chain.last().expect("nonempty chain");
        let rhs = DMatrix::from_column_slice(d, 1, (-prev).as_slice());
        let v = complex_lstsq(&pencil, &rhs)?;
        chain.push(v.column(0).into_owned());
    }
    Ok(vec![chain])
}

/// Solves for the real r×d_s matrix L. K is r×n, M is n×n.
pub fn remark61_solve(
    k: &FPolyMat,
    m: &FPolyMat,
    a_s: &DMatrix<f64>,
    c_s: &DMatrix<f64>,
    jordan: bool,
    tol: &Tolerance,
) -> Result<DMatrix<f64>> {
    let ds = a_s.nrows();
    let r = k.rows;
    let n = m.rows;
    if ds == 0 {
        return Ok(DMatrix::zeros(r, 0));
    }
    let ks = k.star();
    let ms = m.star();
    let cs = cplx(c_s);
    let mut blocks: Vec<(DMatrix<Complex64>, DVector<Complex64>)> = Vec::new();
    for (lambda, mult) in clusters(&eigenvalues(a_s)) {
        for chain in chains(a_s, lambda, mult, jordan)? {
            for kk in 1..=chain.len() {
                let mut coef = DMatrix::<Complex64>::zeros(n, r * ds);
                let mut rhs = DVector::<Complex64>::zeros(n);
                for j in 0..kk {
                    let v = &chain[kk - j - 1];
                    let kt = ks.taylor(lambda, j);
                    for bcol in 0..ds {
                        for a in 0..r {
                            let col = a + bcol * r;
                            for i in 0..n {
                                coef[(i, col)] += kt[(i, a)] * v[bcol];
                            }
                        }
                    }
                    rhs += ms.taylor(lambda, j) * (&cs * v);
                }
                blocks.push((coef, rhs));
            }
        }
    }
    let rows: usize = blocks.iter().map(|(c, _)| c.nrows()).sum();
    let mut big = DMatrix::<f64>::zeros(2 * rows, r * ds);
    let mut rhs = DMatrix::<f64>::zeros(2 * rows, 1);
    let mut at = 0;
    for (c, b) in &blocks {
        for i in 0..c.nrows() {
            for j in 0..c.ncols() {
                big[(at + i, j)] = c[(i, j)].re;
                big[(rows + at + i, j)] = c[(i, j)].im;
            }
            rhs[(at + i, 0)] = b[i].re;
            rhs[(rows + at + i, 0)] = b[i].im;
        }
        at += c.nrows();
    }
    let sol = if r == 0 {
        DMatrix::zeros(0, 1)
    } else {
        lstsq(&big, &rhs)?
    };
    let res = if r == 0 { rhs.norm() } else { (&big * &sol - &rhs).norm() };
    if res > tol.residual_tol * 1e2 * (1.0 + rhs.norm()) {
        return Err(Error::NoL(format!("least-squares residual {res:.3e}")));
    }
    Ok(DMatrix::from_column_slice(r, ds, sol.as_slice()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::FPoly;

    fn scalar(p: &[f64]) -> FPolyMat {
        let mut m = FPolyMat::zeros(1, 1);
        m.set(0, 0, FPoly(p.to_vec()));
        m
    }

    #[test]
    fn rc_single_equation() {
        let r2 = 2f64.sqrt();
        let l = remark61_solve(
            &scalar(&[2.0, r2]),
            &scalar(&[1.0, 1.0]),
            &DMatrix::from_element(1, 1, -1.0),
            &DMatrix::from_element(1, 1, 1.0),
            false,
            &Tolerance::default(),
        )
        .unwrap();
        assert!((l[(0, 0)] - (2.0 - r2)).abs() < 1e-12);
    }

    #[test]
    fn homogeneous_gives_zero() {
        let l = remark61_solve(
            &scalar(&[2.0, 1.0]),
            &scalar(&[1.0, 1.0]),
            &DMatrix::from_element(1, 1, -1.0),
            &DMatrix::zeros(1, 1),
            false,
            &Tolerance::default(),
        )
        .unwrap();
        assert_eq!(l[(0, 0)], 0.0);
    }

    #[test]
    fn jordan_block_needs_flag() {
        let a = DMatrix::from_row_slice(2, 2, &[-1.0, 1.0, 0.0, -1.0]);
        let c = DMatrix::from_row_slice(1, 2, &[1.0, 0.0]);
        let k = scalar(&[1.0, 1.0]);
        let mm = scalar(&[1.0, 2.0, 1.0]);
        let t = Tolerance::default();
        assert!(matches!(
            remark61_solve(&k, &mm, &a, &c, false, &t),
            Err(Error::Unsupported(_))
        ));
        assert!(remark61_solve(&k, &mm, &a, &c, true, &t).is_ok());
    }
}
