//! Polynomial-matrix algebra: determinants, maximal-minor degrees,
//! unimodular reductions, syzygies, constant-rank tests and divisibility.

mod echelon;
mod matrix;

pub use echelon::{echelon, normalrank, row_reduced_square, EchelonForm, EchelonResult};
pub use matrix::{adjugate, det, is_unimodular, maximal_minors, subsets, PolyMat};

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::exactalg::{Poly, Rat};
use crate::numkernel::{roots, Tolerance};

/// Δ(H): the largest degree among determinants of full-size column subsets.
/// Returns `None` when every such determinant vanishes.
pub fn delta(h: &PolyMat) -> Result<Option<usize>> {
    if normalrank(h) < h.rows() {
        return Err(Error::RankDeficient(format!(
            "Δ needs full row normalrank, got {} rows",
            h.rows()
        )));
    }
    Ok(maximal_minors(h)
        .into_iter()
        .filter_map(|(_, d)| d.degree())
        .max())
}

/// Left syzygy basis: rows V with V·R = 0 spanning every such row, and V(λ)
/// of full row rank for every complex λ.
#[derive(Clone, Debug)]
pub struct SyzygyBasis {
    pub v: PolyMat,
}

impl SyzygyBasis {
    pub fn is_empty(&self) -> bool {
        self.v.rows() == 0
    }
}

pub fn syzygy_basis(r: &PolyMat) -> SyzygyBasis {
    let res = echelon(r, EchelonForm::UpperRow);
    let l = r.rows();
    SyzygyBasis {
        v: res.u.block(res.rank, 0, l - res.rank, l),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Complex,
    ClosedRhp,
}

#[derive(Clone, Debug)]
pub struct RankVerdict {
    pub full_rank: bool,
    /// Monic gcd of all maximal minors.
    pub gcd: Poly,
    pub witness: Option<Complex64>,
    /// Set when the exact decision and the floating-point witness disagree.
    pub inconclusive: bool,
}

/// Monic gcd of the maximal minors of a full-row-normalrank matrix, read off
/// as det F from the column echelon form R·W = [F 0].
pub fn minors_gcd(r: &PolyMat) -> Result<Poly> {
    let res = echelon(r, EchelonForm::LowerColumn);
    if res.rank < r.rows() {
        return Err(Error::RankDeficient(format!(
            "normalrank {} < {} rows",
            res.rank,
            r.rows()
        )));
    }
    Ok(det(&res.e).monic())
}

/// Does R(λ) keep full row rank at every λ of the region?
///
/// The decision is exact: over ℂ the minors' gcd must be constant, over the
/// closed right half-plane it must be Hurwitz (exact Routh test). A failing
/// verdict carries a numerically located root of the gcd in the region.
pub fn fullrank_everywhere(r: &PolyMat, region: Region, tol: &Tolerance) -> Result<RankVerdict> {
    let g = minors_gcd(r)?;
    let full_rank = match region {
        Region::Complex => g.is_constant(),
        Region::ClosedRhp => g.is_hurwitz(),
    };
    if full_rank {
        return Ok(RankVerdict {
            full_rank,
            gcd: g,
            witness: None,
            inconclusive: false,
        });
    }
    let rs = roots(&g, tol)?;
    let pick = match region {
        Region::Complex => rs.roots.first().map(|r| r.value),
        Region::ClosedRhp => rs
            .roots
            .iter()
            .map(|r| r.value)
            .max_by(|a, b| a.re.total_cmp(&b.re)),
    };
    let inconclusive = match (region, pick) {
        (Region::ClosedRhp, Some(z)) => z.re < -10.0 * tol.band(z),
        (_, None) => true,
        _ => false,
    };
    Ok(RankVerdict {
        full_rank,
        gcd: g,
        witness: pick,
        inconclusive,
    })
}

pub fn left_coprime(a: &PolyMat, b: &PolyMat, tol: &Tolerance) -> Result<bool> {
    if a.rows() != b.rows() {
        return Err(Error::Dimension("left_coprime needs equal row counts".into()));
    }
    Ok(fullrank_everywhere(&a.hstack(b), Region::Complex, tol)?.full_rank)
}

/// Returns H with A = H·F when it exists.
pub fn divisible_on_right(a: &PolyMat, f: &PolyMat) -> Result<Option<PolyMat>> {
    if !f.is_square() || a.cols() != f.rows() {
        return Err(Error::Dimension("divisible_on_right needs A·F⁻¹ to be defined".into()));
    }
    let d = det(f);
    if d.is_zero() {
        return Err(Error::RankDeficient("F is singular".into()));
    }
    let num = a * &adjugate(f);
    let mut h = PolyMat::zeros(a.rows(), f.cols());
    for i in 0..num.rows() {
        for j in 0..num.cols() {
            match num.get(i, j).div_exact(&d) {
                Some(q) => h.set(i, j, q),
                None => return Ok(None),
            }
        }
    }
    Ok(Some(h))
}

/// Returns H with A = H·B for a full-row-normalrank B, when it exists.
pub fn left_quotient(a: &PolyMat, b: &PolyMat) -> Result<Option<PolyMat>> {
    if a.cols() != b.cols() {
        return Err(Error::Dimension("left_quotient needs equal column counts".into()));
    }
    let pick = maximal_minors(b)
        .into_iter()
        .find(|(_, d)| !d.is_zero())
        .ok_or_else(|| Error::RankDeficient("divisor has deficient normalrank".into()))?
        .0;
    let Some(h) = divisible_on_right(&a.select_cols(&pick), &b.select_cols(&pick))? else {
        return Ok(None);
    };
    Ok((&(&h * b) == a).then_some(h))
}

/// Two full-row-normalrank matrices describe the same kernel iff each is a
/// polynomial left multiple of the other; the multipliers are then
/// unimodular.
pub fn unimodularly_equivalent(r1: &PolyMat, r2: &PolyMat) -> Result<bool> {
    if r1.rows() != r2.rows() || r1.cols() != r2.cols() {
        return Ok(false);
    }
    Ok(left_quotient(r1, r2)?.is_some() && left_quotient(r2, r1)?.is_some())
}

/// Constant scalar multiple used when normalising factors.
pub fn scale_rows(m: &PolyMat, s: &[Rat]) -> PolyMat {
    PolyMat::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j).scale(&s[i]))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn transformer() -> (PolyMat, PolyMat) {
        let p = PolyMat::from_ints(&[&[&[], &[]], &[&[2], &[1]]]);
        let q = PolyMat::from_ints(&[&[&[1], &[-2]], &[&[], &[]]]);
        (p, q)
    }

    #[test]
    fn delta_examples() {
        let r = PolyMat::from_ints(&[&[&[1, 1], &[0, -1]]]);
        assert_eq!(delta(&r).unwrap(), Some(1));
        let (p, q) = transformer();
        assert_eq!(delta(&p.hstack(&-&q)).unwrap(), Some(0));
        let p = PolyMat::from_ints(&[&[&[], &[1, 1]], &[&[], &[]]]);
        let q = PolyMat::from_ints(&[&[&[], &[]], &[&[], &[2, 1]]]);
        assert_eq!(delta(&p.hstack(&-&q)).unwrap(), Some(2));
        assert!(delta(&PolyMat::zeros(1, 2)).is_err());
    }

    #[test]
    fn echelon_examples() {
        let r = PolyMat::from_ints(&[&[&[1, 2, 1], &[0, 1, 1]]]);
        let res = echelon(&r, EchelonForm::LowerColumn);
        assert_eq!(res.rank, 1);
        assert_eq!(res.e.get(0, 0).monic(), Poly::from_ints(&[1, 1]));
        assert_eq!(&r * &res.u, res.e.hstack(&PolyMat::zeros(1, 1)));

        let i3 = PolyMat::identity(3);
        let res = echelon(&i3, EchelonForm::UpperRow);
        assert_eq!(res.u, i3);
        assert_eq!(res.e, i3);

        let c = PolyMat::from_ints(&[&[&[0, 1]], &[&[0, 0, 1]]]);
        let res = echelon(&c, EchelonForm::UpperRow);
        assert_eq!(res.rank, 1);
        let last = res.u.block(1, 0, 1, 2);
        let expect = PolyMat::from_ints(&[&[&[0, 1], &[-1]]]);
        let s = last.get(0, 1).lead() / rat(-1);
        assert_eq!(last, expect.scale(&s));
    }

    #[test]
    fn reduced_forms() {
        // rows [ξ² ξ; ξ 1] has singular leading coefficients
        let q = PolyMat::from_ints(&[&[&[0, 0, 1], &[1, 1]], &[&[0, 1], &[1]]]);
        let res = echelon(&q, EchelonForm::RowReduced);
        assert_eq!(&res.u * &q, res.e);
        assert_eq!(res.e.leading_row_coeffs().rank(), 2);
        assert!(is_unimodular(&res.u));
        let res = echelon(&q, EchelonForm::ColumnReduced);
        assert_eq!(&q * &res.u, res.e);
        assert_eq!(res.e.transpose().leading_row_coeffs().rank(), 2);
    }

    #[test]
    fn syzygy_examples() {
        let c = PolyMat::from_ints(&[&[&[0, 1]], &[&[0, 0, 1]]]);
        let v = syzygy_basis(&c).v;
        assert_eq!(v.rows(), 1);
        assert!((&v * &c).is_zero());
        assert!(syzygy_basis(&PolyMat::from_ints(&[&[&[1, 1]]])).is_empty());
        let (p, q) = transformer();
        let phi = &(&p * &q.star()) + &(&q * &p.star());
        let v = syzygy_basis(&phi).v;
        assert!((&v * &phi).is_zero());
    }

    #[test]
    fn fullrank_examples() {
        let t = tol();
        let r = PolyMat::from_ints(&[&[&[1, 1], &[0, -1]]]);
        assert!(fullrank_everywhere(&r, Region::Complex, &t).unwrap().full_rank);

        let f = Poly::from_ints(&[1, 0, 1]);
        let r = PolyMat::from_rows(vec![vec![
            &f * &Poly::from_ints(&[1, 1]),
            -(&f * &Poly::x()),
        ]])
        .unwrap();
        let v = fullrank_everywhere(&r, Region::ClosedRhp, &t).unwrap();
        assert!(!v.full_rank);
        let w = v.witness.unwrap();
        assert!(w.re.abs() < 1e-9 && (w.im.abs() - 1.0).abs() < 1e-9);

        let r = PolyMat::from_ints(&[&[&[1, 1], &[0, -1, -1]]]);
        let v = fullrank_everywhere(&r, Region::Complex, &t).unwrap();
        assert!(!v.full_rank);
        assert!((v.witness.unwrap() - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
        // stable common factor passes on the closed right half-plane
        assert!(fullrank_everywhere(&r, Region::ClosedRhp, &t).unwrap().full_rank);
    }

    #[test]
    fn divisibility_examples() {
        let a = PolyMat::from_ints(&[&[&[0, 1, 1]]]);
        let f = PolyMat::from_ints(&[&[&[0, 1]]]);
        assert_eq!(divisible_on_right(&a, &f).unwrap().unwrap(), PolyMat::from_ints(&[&[&[1, 1]]]));
        assert!(divisible_on_right(&PolyMat::from_ints(&[&[&[1]]]), &f).unwrap().is_none());
        let f = PolyMat::from_ints(&[&[&[1, 1], &[2]], &[&[0, 1], &[0, 0, 1]]]);
        assert_eq!(divisible_on_right(&f, &f).unwrap().unwrap(), PolyMat::identity(2));
    }

    #[test]
    fn coprime_examples() {
        let t = tol();
        let s = |c: &[i64]| PolyMat::scalar(Poly::from_ints(c));
        assert!(left_coprime(&s(&[0, 1]), &s(&[1]), &t).unwrap());
        assert!(!left_coprime(&s(&[1, 1, 1, 1]), &s(&[0, 1, 0, 1]), &t).unwrap());
        assert!(left_coprime(&s(&[2, 1]), &s(&[1, 1]), &t).unwrap());
    }

    #[test]
    fn equivalence_up_to_unimodular() {
        let r = PolyMat::from_ints(&[&[&[1, 1], &[0, 1]], &[&[2], &[1, 0, 1]]]);
        let u = PolyMat::from_ints(&[&[&[1], &[0, 3]], &[&[], &[2]]]);
        assert!(unimodularly_equivalent(&(&u * &r), &r).unwrap());
        let nu = PolyMat::from_ints(&[&[&[0, 1], &[]], &[&[], &[1]]]);
        assert!(!unimodularly_equivalent(&(&nu * &r), &r).unwrap());
    }
}
