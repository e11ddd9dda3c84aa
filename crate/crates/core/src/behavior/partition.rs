use num::One;

use crate::error::{Error, Result};
use crate::exactalg::{frac, Rat, RatMatrix};
use crate::polymat::{delta, det, PolyMat};
use crate::prpair::{check_pair_with, CheckOptions, PRPairVerdict};

/// Input-output partition of a positive-real pair: inputs are the
/// components selected by T1 from i and by T2 from v.
#[derive(Clone, Debug)]
pub struct Partition {
    /// Indices k whose column is taken from Q in the selected determinant.
    pub selection: Vec<usize>,
    pub t1: RatMatrix,
    pub t2: RatMatrix,
    pub s1: RatMatrix,
    pub s2: RatMatrix,
    pub ptil_io: PolyMat,
    pub qtil_io: PolyMat,
    /// deg det(Q̃_io) = Δ([P̃_io −Q̃_io])
    pub degree: usize,
}

fn selector(n: usize, idx: &[usize]) -> RatMatrix {
    RatMatrix::from_fn(idx.len(), n, |r, c| if idx[r] == c { Rat::one() } else { Rat::from_integer(0.into()) })
}

fn place(m: &mut RatMatrix, r0: usize, c0: usize, b: &RatMatrix) {
    for i in 0..b.nrows() {
        for j in 0..b.ncols() {
            m[(r0 + i, c0 + j)] = b[(i, j)].clone();
        }
    }
}

impl Partition {
    /// Checks every structural identity exactly.
    pub fn verify(&self, p: &PolyMat, q: &PolyMat) -> bool {
        let n = p.rows();
        let eye = RatMatrix::identity(n);
        let eye2 = RatMatrix::identity(2 * n);
        let tt = &(&self.t1.transpose() * &self.t1) + &(&self.t2.transpose() * &self.t2);
        let s1s1 = &self.s1 * &self.s1.transpose();
        let s2s2 = (&self.s2 * &self.s2.transpose()).scale(&Rat::from_integer(2.into()));
        let lhs = self.ptil_io.hstack(&-&self.qtil_io);
        let rhs = &p.hstack(&-q) * &PolyMat::constant(&self.s1);
        let dq = det(&self.qtil_io);
        let proper = matches!(delta(&lhs), Ok(Some(d)) if Some(d) == dq.degree());
        tt == eye && s1s1 == eye2 && s2s2 == eye2 && lhs == rhs && !dq.is_zero() && proper
    }
}

/// Chooses inputs so that Q̃_io⁻¹P̃_io is proper, by picking a determinant of
/// greatest degree among the 2ⁿ terms of det(P + Q) obtained by mixing
/// columns of P and Q. Ties go to the lowest selection bitmask.
pub fn passive_partition(p: &PolyMat, q: &PolyMat, opts: &CheckOptions) -> Result<Partition> {
    let verdict = check_pair_with(p, q, opts)?;
    if !verdict.passes() {
        return Err(Error::NotPositiveRealPair);
    }
    partition_unchecked(p, q)
}

pub(crate) fn partition_unchecked(p: &PolyMat, q: &PolyMat) -> Result<Partition> {
    let n = p.rows();
    if n > 16 {
        return Err(Error::Unsupported("partition enumeration beyond n = 16".into()));
    }
    let mut best: Option<(usize, u32)> = None;
    for mask in 0u32..(1 << n) {
        let mut m = p.clone();
        for k in 0..n {
            if mask >> k & 1 == 1 {
                for i in 0..n {
                    m.set(i, k, q.get(i, k).clone());
                }
            }
        }
        if let Some(d) = det(&m).degree() {
            if best.is_none_or(|(bd, _)| d > bd) {
                best = Some((d, mask));
            }
        }
    }
    let (_, mask) = best.ok_or(Error::NotPositiveRealPair)?;
    let sel: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
    let rest: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 0).collect();
    let t1 = selector(n, &sel);
    let t2 = selector(n, &rest);
    let (k1, k2) = (sel.len(), rest.len());
    let mut s1 = RatMatrix::zeros(2 * n, 2 * n);
    place(&mut s1, 0, 0, &t1.transpose());
    place(&mut s1, 0, k1 + k2 + k1, &t2.transpose());
    place(&mut s1, n, k1, &t2.transpose());
    place(&mut s1, n, k1 + k2, &t1.transpose());
    let half = frac(1, 2);
    let mut s2 = RatMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        s2[(i, i)] = half.clone();
        s2[(i, n + i)] = half.clone();
        s2[(n + i, i)] = -half.clone();
        s2[(n + i, n + i)] = half.clone();
    }
    let t1p = PolyMat::constant(&t1.transpose());
    let t2p = PolyMat::constant(&t2.transpose());
    let qtil_io = (q * &t1p).hstack(&-&(p * &t2p));
    let ptil_io = (p * &t1p).hstack(&-&(q * &t2p));
    let degree = det(&qtil_io).degree().ok_or(Error::NotPositiveRealPair)?;
    let part = Partition {
        selection: sel,
        t1,
        t2,
        s1,
        s2,
        ptil_io,
        qtil_io,
        degree,
    };
    if !part.verify(p, q) {
        return Err(Error::VerificationFailed("partition invariants".into()));
    }
    Ok(part)
}

/// The pair verdict, plus the input-output partition when the pair passes.
pub fn behavior_is_passive(
    p: &PolyMat,
    q: &PolyMat,
    opts: &CheckOptions,
) -> Result<(PRPairVerdict, Option<Partition>)> {
    let verdict = check_pair_with(p, q, opts)?;
    let part = if verdict.passes() {
        Some(partition_unchecked(p, q)?)
    } else {
        None
    };
    Ok((verdict, part))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Poly;
    use crate::prpair::{check_pair, Status};

    fn s(c: &[i64]) -> PolyMat {
        PolyMat::scalar(Poly::from_ints(c))
    }

    #[test]
    fn transformer_partition() {
        let p = PolyMat::from_ints(&[&[&[], &[]], &[&[2], &[1]]]);
        let q = PolyMat::from_ints(&[&[&[1], &[-2]], &[&[], &[]]]);
        let part = passive_partition(&p, &q, &CheckOptions::default()).unwrap();
        assert_eq!(part.selection, vec![0]);
        assert_eq!(part.qtil_io, PolyMat::from_ints(&[&[&[1], &[]], &[&[], &[-1]]]));
        assert_eq!(part.ptil_io, PolyMat::from_ints(&[&[&[], &[2]], &[&[2], &[]]]));
        assert!(check_pair(&part.ptil_io, &part.qtil_io).unwrap().passes());
    }

    #[test]
    fn capacitor_takes_voltage_as_input() {
        let part = passive_partition(&s(&[1]), &s(&[0, 1]), &CheckOptions::default()).unwrap();
        assert_eq!(part.selection, vec![0]);
        assert_eq!(part.qtil_io, s(&[0, 1]));
        assert_eq!(part.degree, 1);
    }

    #[test]
    fn resistor_tie_goes_to_lowest_mask() {
        let part = passive_partition(&s(&[1]), &s(&[1]), &CheckOptions::default()).unwrap();
        assert!(part.selection.is_empty());
    }

    #[test]
    fn behavior_verdicts() {
        let o = CheckOptions::default();
        let (v, part) = behavior_is_passive(&s(&[1, 1]), &s(&[0, 1]), &o).unwrap();
        assert!(v.passes() && part.is_some());
        let (v, part) = behavior_is_passive(&s(&[1, 1, 1, 1]), &s(&[0, 1, 0, 1]), &o).unwrap();
        assert_eq!(v.overall, Status::Fail);
        assert!(part.is_none());
        let (v, _) = behavior_is_passive(&s(&[1, 1]), &s(&[0, 1, 1]), &o).unwrap();
        assert_eq!(v.cond3, Status::Fail);
        assert!(matches!(
            passive_partition(&s(&[1, 1]), &s(&[0, 1, 1]), &o),
            Err(Error::NotPositiveRealPair)
        ));
    }
}
