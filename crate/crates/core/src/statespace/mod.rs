//! State-space side: conversions between (A, B, C, D) and polynomial pairs,
//! the observer staircase form, rank tests and a fixed-step simulator.

mod signal;
mod sim;

pub use signal::{parse_signals, Signal, Term, Trig};
pub use sim::{cumulative_integral, simulate, storage_check, StorageCheck, Trajectory};

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::One;

use crate::error::{Error, Result};
use crate::exactalg::{Rat, RatMatrix};
use crate::numkernel::Tolerance;
use crate::polymat::{
    delta, det, fullrank_everywhere, left_coprime, row_reduced_square, syzygy_basis,
    unimodularly_equivalent, PolyMat, Region,
};

/// ẋ = Ax + Bu, y = Cx + Du with exact rational entries.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSpace {
    pub a: RatMatrix,
    pub b: RatMatrix,
    pub c: RatMatrix,
    pub d: RatMatrix,
}

impl StateSpace {
    pub fn new(a: RatMatrix, b: RatMatrix, c: RatMatrix, d: RatMatrix) -> Result<Self> {
        let (nx, nu) = (a.nrows(), d.nrows());
        let ok = a.ncols() == nx
            && b.nrows() == nx
            && b.ncols() == nu
            && c.nrows() == nu
            && c.ncols() == nx
            && d.ncols() == nu;
        if !ok {
            return Err(Error::Dimension(format!(
                "A {}x{}, B {}x{}, C {}x{}, D {}x{}",
                a.nrows(),
                a.ncols(),
                b.nrows(),
                b.ncols(),
                c.nrows(),
                c.ncols(),
                d.nrows(),
                d.ncols()
            )));
        }
        Ok(StateSpace { a, b, c, d })
    }

    pub fn from_ints(a: &[&[i64]], b: &[&[i64]], c: &[&[i64]], d: &[&[i64]]) -> Result<Self> {
        let m = |rows: &[&[i64]], r: usize, k: usize| {
            if rows.is_empty() {
                RatMatrix::zeros(r, k)
            } else {
                RatMatrix::from_ints(rows)
            }
        };
        let nx = a.len();
        let nu = d.len();
        Self::new(m(a, nx, nx), m(b, nx, nu), m(c, nu, nx), m(d, nu, nu))
    }

    /// State dimension.
    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    /// Number of ports.
    pub fn ports(&self) -> usize {
        self.d.nrows()
    }

    pub fn af(&self) -> DMatrix<f64> {
        self.a.to_f64()
    }
    pub fn bf(&self) -> DMatrix<f64> {
        self.b.to_f64()
    }
    pub fn cf(&self) -> DMatrix<f64> {
        self.c.to_f64()
    }
    pub fn df(&self) -> DMatrix<f64> {
        self.d.to_f64()
    }

    /// G(λ) = D + C(λI − A)⁻¹B; `None` at an eigenvalue of A.
    pub fn transfer(&self, lambda: Complex64) -> Option<DMatrix<Complex64>> {
        let d = self.order();
        let cplx = |m: DMatrix<f64>| m.map(|x| Complex64::new(x, 0.0));
        let res = DMatrix::<Complex64>::identity(d, d) * lambda - cplx(self.af());
        let inv = res.try_inverse()?;
        Some(cplx(self.df()) + cplx(self.cf()) * inv * cplx(self.bf()))
    }

    /// [B AB … A^{d−1}B]
    pub fn controllability_matrix(&self) -> RatMatrix {
        let mut blocks = RatMatrix::zeros(self.order(), 0);
        let mut cur = self.b.clone();
        for _ in 0..self.order() {
            blocks = blocks.hstack(&cur);
            cur = &self.a * &cur;
        }
        blocks
    }

    /// col(C, CA, …, CA^{d−1})
    pub fn observability_matrix(&self) -> RatMatrix {
        let mut blocks = RatMatrix::zeros(0, self.order());
        let mut cur = self.c.clone();
        for _ in 0..self.order() {
            blocks = blocks.vstack(&cur);
            cur = &cur * &self.a;
        }
        blocks
    }
}

pub fn controllable(ss: &StateSpace) -> bool {
    ss.controllability_matrix().rank() == ss.order()
}

pub fn observable(ss: &StateSpace) -> bool {
    ss.observability_matrix().rank() == ss.order()
}

/// [λI − A  B] keeps full row rank on the closed right half-plane.
pub fn stabilizable(ss: &StateSpace, tol: &Tolerance) -> Result<bool> {
    if ss.order() == 0 {
        return Ok(true);
    }
    let r = (-&PolyMat::resolvent_pencil(&ss.a)).hstack(&PolyMat::constant(&ss.b));
    Ok(fullrank_everywhere(&r, Region::ClosedRhp, tol)?.full_rank)
}

/// Observer staircase form with orthonormal T:
/// T·A·Tᵀ = [[Ã11, 0], [Ã21, Ã22]], C·Tᵀ = [C̃1 0], T·B = col(B̃1, B̃2).
#[derive(Clone, Debug)]
pub struct StaircaseForm {
    pub t: DMatrix<f64>,
    pub d1: usize,
    pub a11: DMatrix<f64>,
    pub a21: DMatrix<f64>,
    pub a22: DMatrix<f64>,
    pub c1: DMatrix<f64>,
    pub b1: DMatrix<f64>,
    pub b2: DMatrix<f64>,
    /// Norms of the blocks that should vanish.
    pub residual: f64,
}

/// The observable dimension comes from the exact rank of the observability
/// matrix; the bases are orthonormal vectors from its SVD.
pub fn staircase(ss: &StateSpace) -> StaircaseForm {
    let d = ss.order();
    let vo = ss.observability_matrix();
    let d1 = vo.rank();
    let t = if d == 0 {
        DMatrix::zeros(0, 0)
    } else {
        let f = vo.to_f64();
        let mut sq = DMatrix::zeros(f.nrows().max(d), d);
        sq.view_mut((0, 0), (f.nrows(), d)).copy_from(&f);
        sq.svd(false, true).v_t.expect("requested V")
    };
    let at = &t * ss.af() * t.transpose();
    let ct = ss.cf() * t.transpose();
    let bt = &t * ss.bf();
    let d2 = d - d1;
    let n = ss.ports();
    let residual = at.view((0, d1), (d1, d2)).norm() + ct.view((0, d1), (n, d2)).norm();
    StaircaseForm {
        d1,
        a11: at.view((0, 0), (d1, d1)).into_owned(),
        a21: at.view((d1, 0), (d2, d1)).into_owned(),
        a22: at.view((d1, d1), (d2, d2)).into_owned(),
        c1: ct.view((0, 0), (n, d1)).into_owned(),
        b1: bt.view((0, 0), (d1, n)).into_owned(),
        b2: bt.view((d1, 0), (d2, n)).into_owned(),
        t,
        residual,
    }
}

/// Behavior of (u, y) = (i, v) as a left coprime pair: P̃ = ÑB + M̃D and
/// Q̃ = M̃ with M̃C = Ñ(ξI − A).
#[derive(Clone, Debug)]
pub struct Realized {
    pub ptil: PolyMat,
    pub qtil: PolyMat,
    pub mtil: PolyMat,
    pub ntil: PolyMat,
}

/// Fixed evaluation points for transfer-function consistency checks.
pub(crate) const PROBES: [(f64, f64); 5] = [
    (0.37, 1.91),
    (-0.83, 0.52),
    (1.29, -2.44),
    (0.05, 3.17),
    (-1.61, -0.77),
];

/// Max relative mismatch of D + C(λI−A)⁻¹B against Q̃(λ)⁻¹P̃(λ) over the
/// probe points.
pub fn transfer_mismatch(ss: &StateSpace, p: &PolyMat, q: &PolyMat) -> f64 {
    let mut worst: f64 = 0.0;
    for &(re, im) in &PROBES {
        let l = Complex64::new(re, im);
        let (Some(g), Some(qi)) = (ss.transfer(l), q.eval_c64(l).try_inverse()) else {
            continue;
        };
        let h = qi * p.eval_c64(l);
        worst = worst.max((&g - &h).norm() / (1.0 + g.norm()));
    }
    worst
}

pub fn realize_behavior(ss: &StateSpace) -> Result<Realized> {
    let n = ss.ports();
    let d = ss.order();
    let pencil = PolyMat::resolvent_pencil(&ss.a);
    let r = PolyMat::constant(&ss.c).vstack(&-&pencil);
    let v = syzygy_basis(&r).v;
    if v.rows() != n {
        return Err(Error::Numerical("syzygy of [C; -(ξI-A)] has wrong size".into()));
    }
    let mut mtil = v.block(0, 0, n, n);
    let mut ntil = v.block(0, n, n, d);
    let mut ptil = &(&ntil * &PolyMat::constant(&ss.b)) + &(&mtil * &PolyMat::constant(&ss.d));
    let mut qtil = mtil.clone();
    let dq = det(&qtil);
    if dq.is_zero() {
        return Err(Error::Numerical("Q̃ is singular".into()));
    }
    let c = dq.lead();
    if !c.is_one() && n > 0 {
        let inv = Rat::one() / c;
        for m in [&mut mtil, &mut ntil, &mut ptil, &mut qtil] {
            for j in 0..m.cols() {
                m.set(0, j, m.get(0, j).scale(&inv));
            }
        }
    }
    let out = Realized {
        ptil,
        qtil,
        mtil,
        ntil,
    };
    if &out.mtil * &PolyMat::constant(&ss.c) != &out.ntil * &pencil {
        return Err(Error::VerificationFailed("M̃C = Ñ(ξI-A)".into()));
    }
    if !left_coprime(&out.mtil, &out.ntil, &Tolerance::default())? {
        return Err(Error::VerificationFailed("M̃, Ñ not left coprime".into()));
    }
    if transfer_mismatch(ss, &out.ptil, &out.qtil) > 1e-8 {
        return Err(Error::VerificationFailed("transfer function mismatch".into()));
    }
    Ok(out)
}

/// Observer-form realization of Q̃(d/dt)y = P̃(d/dt)u.
pub fn realize_statespace(ptil: &PolyMat, qtil: &PolyMat) -> Result<StateSpace> {
    let n = qtil.rows();
    if !qtil.is_square() || !ptil.is_square() || ptil.rows() != n {
        return Err(Error::Dimension("P̃ and Q̃ must be square of equal size".into()));
    }
    let dq = det(qtil);
    let Some(order) = dq.degree() else {
        return Err(Error::NoRealization);
    };
    if delta(&ptil.hstack(&-qtil))? != Some(order) {
        return Err(Error::NoRealization);
    }
    let (u, qr) = row_reduced_square(qtil);
    let pr = &u * ptil;
    let k: Vec<usize> = (0..n).map(|i| qr.row_degree(i).unwrap_or(0)).collect();
    let qh = qr.leading_row_coeffs();
    let qh_inv = qh.inverse().ok_or(Error::NoRealization)?;
    let ph = RatMatrix::from_fn(n, n, |i, j| pr.get(i, j).coeff(k[i]));
    let dmat = &qh_inv * &ph;
    let pstrict = &pr - &(&qr * &PolyMat::constant(&dmat));
    for i in 0..n {
        if pstrict.row_degree(i).is_some_and(|r| r >= k[i]) {
            return Err(Error::NoRealization);
        }
    }
    let dsum: usize = k.iter().sum();
    if dsum != order {
        return Err(Error::NoRealization);
    }
    let mut offs = vec![0; n];
    for i in 1..n {
        offs[i] = offs[i - 1] + k[i - 1];
    }
    // z = Qh⁻¹·E·x with E picking the head of each chain
    let mut e = RatMatrix::zeros(n, dsum);
    for i in 0..n {
        if k[i] > 0 {
            e[(i, offs[i])] = Rat::one();
        }
    }
    let cmat = &qh_inv * &e;
    let mut a = RatMatrix::zeros(dsum, dsum);
    let mut b = RatMatrix::zeros(dsum, n);
    for i in 0..n {
        for m in 1..=k[i] {
            let row = offs[i] + m - 1;
            if m < k[i] {
                a[(row, row + 1)] += Rat::one();
            }
            let l = k[i] - m;
            let alpha = RatMatrix::from_fn(1, n, |_, j| qr.get(i, j).coeff(l));
            let ac = &alpha * &cmat;
            for j in 0..dsum {
                let v = a[(row, j)].clone() - ac[(0, j)].clone();
                a[(row, j)] = v;
            }
            for j in 0..n {
                b[(row, j)] = pstrict.get(i, j).coeff(l);
            }
        }
    }
    let ss = StateSpace::new(a, b, cmat, dmat)?;
    let back = realize_behavior(&ss)?;
    let orig = ptil.hstack(&-qtil);
    let round = back.ptil.hstack(&-&back.qtil);
    if !unimodularly_equivalent(&orig, &round)? {
        return Err(Error::VerificationFailed("realization round trip".into()));
    }
    Ok(ss)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Poly;

    pub(crate) fn example23() -> StateSpace {
        StateSpace::from_ints(
            &[&[0, 0, 1], &[0, 0, 1], &[0, -1, 0]],
            &[&[1], &[0], &[0]],
            &[&[1, 1, 0]],
            &[&[1]],
        )
        .unwrap()
    }

    fn s(c: &[i64]) -> PolyMat {
        PolyMat::scalar(Poly::from_ints(c))
    }

    #[test]
    fn integrator_pair() {
        let ss = StateSpace::from_ints(&[&[0]], &[&[1]], &[&[1]], &[&[0]]).unwrap();
        let r = realize_behavior(&ss).unwrap();
        assert_eq!(r.qtil, s(&[0, 1]));
        assert_eq!(r.ptil, s(&[1]));
    }

    #[test]
    fn rc_pair() {
        let ss = StateSpace::from_ints(&[&[-1]], &[&[1]], &[&[1]], &[&[1]]).unwrap();
        let r = realize_behavior(&ss).unwrap();
        assert_eq!(r.qtil, s(&[1, 1]));
        assert_eq!(r.ptil, s(&[2, 1]));
    }

    #[test]
    fn example23_pair_is_equivalent() {
        let r = realize_behavior(&example23()).unwrap();
        let want = s(&[1, 1, 1, 1]).hstack(&-s(&[0, 1, 0, 1]));
        assert!(unimodularly_equivalent(&r.ptil.hstack(&-&r.qtil), &want).unwrap());
    }

    #[test]
    fn example23_rank_tests() {
        let ss = example23();
        assert_eq!(ss.controllability_matrix().rank(), 1);
        assert!(!controllable(&ss));
        assert!(observable(&ss));
        assert!(!stabilizable(&ss, &Tolerance::default()).unwrap());
    }

    #[test]
    fn minus_identity_is_stabilizable() {
        let ss = StateSpace::new(
            RatMatrix::from_ints(&[&[-1, 0], &[0, -1]]),
            RatMatrix::zeros(2, 1),
            RatMatrix::zeros(1, 2),
            RatMatrix::zeros(1, 1),
        )
        .unwrap();
        assert!(stabilizable(&ss, &Tolerance::default()).unwrap());
    }

    #[test]
    fn observer_realizations() {
        let ss = realize_statespace(&s(&[1]), &s(&[0, 1])).unwrap();
        assert_eq!(ss, StateSpace::from_ints(&[&[0]], &[&[1]], &[&[1]], &[&[0]]).unwrap());
        let ss = realize_statespace(&s(&[2, 1]), &s(&[1, 1])).unwrap();
        assert_eq!(ss, StateSpace::from_ints(&[&[-1]], &[&[1]], &[&[1]], &[&[1]]).unwrap());
        assert_eq!(realize_statespace(&s(&[0, 1]), &s(&[1])), Err(Error::NoRealization));
    }

    #[test]
    fn staircase_of_unobservable_system() {
        let ss = StateSpace::from_ints(&[&[-1, 0], &[0, -2]], &[&[1], &[1]], &[&[1, 0]], &[&[0]])
            .unwrap();
        let st = staircase(&ss);
        assert_eq!(st.d1, 1);
        assert!(st.residual < 1e-12);
        assert!((st.a11[(0, 0)] + 1.0).abs() < 1e-12);
        let ex = staircase(&example23());
        assert_eq!(ex.d1, 3);
    }

    #[test]
    fn transformer_round_trip() {
        let p = PolyMat::from_ints(&[&[&[], &[2]], &[&[2], &[]]]);
        let q = PolyMat::from_ints(&[&[&[1], &[]], &[&[], &[-1]]]);
        let ss = realize_statespace(&p, &q).unwrap();
        assert_eq!(ss.order(), 0);
        assert!((&ss.d - &RatMatrix::from_ints(&[&[0, 2], &[-2, 0]])).is_zero());
    }
}
