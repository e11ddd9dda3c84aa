//! Decision procedure for positive-real pairs, with witnesses that are
//! re-checked numerically before they are returned.

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;
use num::Zero;

use crate::behavior::decompose;
use crate::error::{Error, Result};
use crate::exactalg::Poly;
use crate::numkernel::{
    hermitian_psd, roots, smallest_singular, FPoly, FPolyMat, RegionTag, Tolerance,
};
use crate::polymat::{
    det, divisible_on_right, fullrank_everywhere, normalrank, subsets, syzygy_basis, PolyMat,
    Region,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }

    fn combine(items: &[Status]) -> Status {
        if items.contains(&Status::Fail) {
            Status::Fail
        } else if items.contains(&Status::Inconclusive) {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    /// Φ(jω) indefinite on the imaginary axis.
    Axis,
    /// Negative direction at a right half-plane point.
    HalfPlane,
}

/// z̄ᵀ(P(λ)Q(λ̄)ᵀ + Q(λ)P(λ̄)ᵀ)z = value < 0.
#[derive(Clone, Debug)]
pub struct Witness1 {
    pub lambda: Complex64,
    pub z: DVector<Complex64>,
    pub value: f64,
    pub stage: Stage,
}

/// rank [P −Q](λ) < n; `sigma_min` is the smallest singular value there.
#[derive(Clone, Debug)]
pub struct Witness2 {
    pub lambda: Complex64,
    pub sigma_min: f64,
    pub explanation: String,
}

/// Real polynomial row p with pᵀ(PQ⋆ + QP⋆) = 0, p(λ) ≠ 0 and
/// p(λ)ᵀ[P −Q](λ) ≈ 0 (relative residual).
#[derive(Clone, Debug)]
pub struct Witness3 {
    pub lambda: Complex64,
    pub p: Vec<FPoly>,
    pub residual: f64,
}

/// Agreement between the syzygy rank test for condition 3 and the
/// divisibility form computed through the decomposition.
#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub applicable: bool,
    pub direct: Option<Status>,
    pub agrees: bool,
}

#[derive(Clone, Debug)]
pub struct PRPairVerdict {
    pub cond1: Status,
    pub cond2: Status,
    pub cond3: Status,
    pub witness1: Option<Witness1>,
    pub witness2: Option<Witness2>,
    pub witness3: Option<Witness3>,
    pub overall: Status,
    pub cross_check: Option<CrossCheck>,
    pub notes: Vec<String>,
}

impl PRPairVerdict {
    pub fn passes(&self) -> bool {
        self.overall == Status::Pass
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    pub tol: Tolerance,
    pub cross_check: bool,
}

fn check_square(p: &PolyMat, q: &PolyMat) -> Result<usize> {
    let n = p.rows();
    if !p.is_square() || !q.is_square() || q.rows() != n {
        return Err(Error::Dimension("P and Q must be square of equal size".into()));
    }
    Ok(n)
}

/// Φ = P·Q⋆ + Q·P⋆
pub fn para_hermitian(p: &PolyMat, q: &PolyMat) -> PolyMat {
    &(p * &q.star()) + &(q * &p.star())
}

/// Left null direction of a wide matrix: c with cᴴ·R ≈ 0, and σ_min(R).
fn left_null(r: &DMatrix<Complex64>) -> (f64, DVector<Complex64>) {
    smallest_singular(&r.adjoint())
}

fn hermitian_at(p: &PolyMat, q: &PolyMat, lambda: Complex64) -> DMatrix<Complex64> {
    let pl = p.eval_c64(lambda);
    let ql = q.eval_c64(lambda);
    &pl * ql.adjoint() + &ql * pl.adjoint()
}

fn quad(h: &DMatrix<Complex64>, z: &DVector<Complex64>) -> f64 {
    (z.adjoint() * h * z)[(0, 0)].re
}

pub type Cond1 = (Status, Option<Witness1>, Vec<String>);

/// Condition 1: PSD of P(λ)Q(λ̄)ᵀ + Q(λ)P(λ̄)ᵀ on the closed right half-plane.
///
/// Decided exactly as (i) Φ(jω) ⪰ 0 for all real ω, through Sturm tests on
/// every principal minor, and (ii) det(P̃ + Q̃) Hurwitz, where (P̃, Q̃) is the
/// left coprime part of the pair. The common left factor F does not affect
/// the condition, so (ii) on the coprime part makes the test exact without
/// assuming condition 2.
pub fn check_condition1(p: &PolyMat, q: &PolyMat, tol: &Tolerance) -> Result<Cond1> {
    let n = check_square(p, q)?;
    let mut notes = Vec::new();
    if n == 0 {
        return Ok((Status::Pass, None, notes));
    }
    let phi = para_hermitian(p, q);
    let mut failing = Vec::new();
    for k in 1..=n {
        for s in subsets(n, k) {
            let m = det(&phi.select(&s, &s));
            let (re, _) = m.axis_parts();
            if !crate::exactalg::sturm_nonneg_on_reals(&re) {
                failing.push(re);
            }
        }
    }
    if !failing.is_empty() {
        return Ok(match axis_witness(&phi, &failing, tol)? {
            Some(w) => (Status::Fail, Some(w), notes),
            None => {
                notes.push("Φ(jω) has a negative principal minor but no numeric witness was found".into());
                (Status::Inconclusive, None, notes)
            }
        });
    }
    let r = p.hstack(&-q);
    let rank = normalrank(&r);
    if rank == 0 {
        return Ok((Status::Pass, None, notes));
    }
    if rank < n {
        notes.push(format!(
            "condition 1 undecided off the axis: [P -Q] has normalrank {rank} < {n}"
        ));
        return Ok((Status::Inconclusive, None, notes));
    }
    let dec = decompose(p, q)?;
    let d = det(&(&dec.ptil + &dec.qtil));
    if !d.is_zero() && d.is_hurwitz() {
        return Ok((Status::Pass, None, notes));
    }
    let lambda = if d.is_zero() {
        Complex64::new(1.0, 0.0)
    } else {
        let rs = roots(&d, tol)?;
        let z = rs
            .roots
            .iter()
            .map(|r| r.value)
            .max_by(|a, b| a.re.total_cmp(&b.re))
            .ok_or(Error::ZeroPolynomial)?;
        if tol.classify(z) == RegionTag::OpenLhp {
            notes.push(format!(
                "det(P̃+Q̃) is not Hurwitz yet its computed roots lie left of the axis band (max Re = {:.3e})",
                z.re
            ));
            return Ok((Status::Inconclusive, None, notes));
        }
        z
    };
    match half_plane_witness(p, q, lambda, tol)? {
        Some(w) => Ok((Status::Fail, Some(w), notes)),
        None => {
            notes.push(format!(
                "det(P̃+Q̃) vanishes at {lambda} but no negative direction was located"
            ));
            Ok((Status::Inconclusive, None, notes))
        }
    }
}

fn axis_witness(phi: &PolyMat, failing: &[Poly], tol: &Tolerance) -> Result<Option<Witness1>> {
    let mut pts: Vec<f64> = Vec::new();
    for m in failing {
        if m.degree().unwrap_or(0) == 0 {
            continue;
        }
        for r in roots(m, tol)?.roots {
            if r.value.im.abs() <= 1e-6 * (1.0 + r.value.norm()) {
                pts.push(r.value.re);
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    let mut cands = vec![0.0, 1.0, -1.0];
    if let (Some(&lo), Some(&hi)) = (pts.first(), pts.last()) {
        cands.push(lo - 1.0);
        cands.push(hi + 1.0);
    }
    cands.extend(pts.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    cands.extend(pts.iter().copied());
    let mut best: Option<(f64, Complex64, DVector<Complex64>)> = None;
    for w in cands {
        let lambda = Complex64::new(0.0, w);
        let h = phi.eval_c64(lambda);
        let chk = hermitian_psd(&h, tol)?;
        if let Some(z) = chk.witness {
            if best.as_ref().is_none_or(|b| chk.min_eigenvalue < b.0) {
                best = Some((chk.min_eigenvalue, lambda, z));
            }
        }
    }
    Ok(best.and_then(|(_, lambda, z)| {
        let h = phi.eval_c64(lambda);
        let value = quad(&h, &z);
        (value < 0.0).then_some(Witness1 {
            lambda,
            z,
            value,
            stage: Stage::Axis,
        })
    }))
}

fn half_plane_witness(
    p: &PolyMat,
    q: &PolyMat,
    lambda: Complex64,
    tol: &Tolerance,
) -> Result<Option<Witness1>> {
    let scale = 1.0 + lambda.norm();
    for delta in [0.0, 1e-3, 1e-2, 1e-1] {
        let l = lambda + Complex64::new(delta * scale, 0.0);
        let h = hermitian_at(p, q, l);
        let chk = hermitian_psd(&h, tol)?;
        if let Some(z) = chk.witness {
            let value = quad(&h, &z);
            if value < 0.0 {
                return Ok(Some(Witness1 {
                    lambda: l,
                    z,
                    value,
                    stage: Stage::HalfPlane,
                }));
            }
        }
    }
    Ok(None)
}

pub type Cond2 = (Status, Option<Witness2>, Vec<String>);

/// Condition 2: rank [P −Q](λ) = n on the closed right half-plane.
pub fn check_condition2(p: &PolyMat, q: &PolyMat, tol: &Tolerance) -> Result<Cond2> {
    let n = check_square(p, q)?;
    let mut notes = Vec::new();
    if n == 0 {
        return Ok((Status::Pass, None, notes));
    }
    let r = p.hstack(&-q);
    let rank = normalrank(&r);
    if rank < n {
        let lambda = Complex64::zero();
        let (sigma_min, _) = left_null(&r.eval_c64(lambda));
        return Ok((
            Status::Fail,
            Some(Witness2 {
                lambda,
                sigma_min,
                explanation: format!(
                    "normalrank([P -Q]) = {rank} < {n}: the rank drops at every λ"
                ),
            }),
            notes,
        ));
    }
    let v = fullrank_everywhere(&r, Region::ClosedRhp, tol)?;
    if v.full_rank {
        return Ok((Status::Pass, None, notes));
    }
    let Some(lambda) = v.witness.filter(|_| !v.inconclusive) else {
        notes.push(format!(
            "gcd of maximal minors {} is not Hurwitz but its roots straddle the axis band",
            v.gcd
        ));
        return Ok((Status::Inconclusive, None, notes));
    };
    let rl = r.eval_c64(lambda);
    let (sigma_min, _) = left_null(&rl);
    if sigma_min > tol.residual_tol * (1.0 + rl.norm()) {
        notes.push(format!(
            "rank-drop witness λ = {lambda} did not re-verify (σ_min = {sigma_min:.3e})"
        ));
        return Ok((Status::Inconclusive, None, notes));
    }
    Ok((
        Status::Fail,
        Some(Witness2 {
            lambda,
            sigma_min,
            explanation: format!(
                "[P -Q](λ) loses rank at a root of the minors' gcd {}",
                v.gcd
            ),
        }),
        notes,
    ))
}

pub type Cond3 = (Status, Option<Witness3>, Vec<String>);

/// Condition 3 through the syzygy V of Φ: V·[P −Q] must keep full row rank
/// at every complex λ.
pub fn check_condition3(p: &PolyMat, q: &PolyMat, tol: &Tolerance) -> Result<Cond3> {
    let n = check_square(p, q)?;
    let mut notes = Vec::new();
    let phi = para_hermitian(p, q);
    let syz = syzygy_basis(&phi);
    if n == 0 || syz.is_empty() {
        return Ok((Status::Pass, None, notes));
    }
    let v = syz.v;
    let r = p.hstack(&-q);
    let r3 = &v * &r;
    let fv = FPolyMat::from_exact(&v);
    let fr = FPolyMat::from_exact(&r);
    if normalrank(&r3) < r3.rows() {
        let s = syzygy_basis(&r3).v;
        let prow = &s.block(0, 0, 1, s.cols()) * &v;
        let fp = FPolyMat::from_exact(&prow);
        for k in 0..8 {
            let lambda = Complex64::new(k as f64, 0.0);
            let pl = fp.eval(lambda);
            if pl.norm() > 1e-12 {
                let residual = (&pl * fr.eval(lambda)).norm() / pl.norm();
                return Ok((
                    Status::Fail,
                    Some(Witness3 {
                        lambda,
                        p: (0..n).map(|j| fp.get(0, j).clone()).collect(),
                        residual,
                    }),
                    notes,
                ));
            }
        }
        notes.push("V[P -Q] is rank deficient but no evaluation point was found".into());
        return Ok((Status::Inconclusive, None, notes));
    }
    let verdict = fullrank_everywhere(&r3, Region::Complex, tol)?;
    if verdict.full_rank {
        return Ok((Status::Pass, None, notes));
    }
    let Some(lambda) = verdict.witness else {
        return Ok((Status::Inconclusive, None, notes));
    };
    let r3l = FPolyMat::from_exact(&r3).eval(lambda);
    let (_, c) = left_null(&r3l);
    // row g with gᵀ·R3(λ) = 0
    let gc: Vec<Complex64> = c.iter().map(|z| z.conj()).collect();
    let g = real_interpolant(&gc, lambda);
    let k = v.rows();
    let prow: Vec<FPoly> = (0..n)
        .map(|j| {
            (0..k).fold(FPoly(vec![]), |acc, i| acc.add(&g[i].mul(fv.get(i, j))))
        })
        .collect();
    let pl = DMatrix::from_fn(1, n, |_, j| prow[j].eval(lambda));
    let rl = fr.eval(lambda);
    let residual = (&pl * &rl).norm() / pl.norm().max(f64::MIN_POSITIVE);
    if !(residual <= tol.residual_tol * (1.0 + rl.norm()) * 1e2) {
        notes.push(format!(
            "condition 3 witness at λ = {lambda} did not re-verify (residual {residual:.3e})"
        ));
        return Ok((Status::Inconclusive, None, notes));
    }
    Ok((
        Status::Fail,
        Some(Witness3 {
            lambda,
            p: prow,
            residual,
        }),
        notes,
    ))
}

/// Real polynomials g_i of degree ≤ 1 with g(λ) = target; for real λ the
/// target is rotated to a real vector first.
fn real_interpolant(target: &[Complex64], lambda: Complex64) -> Vec<FPoly> {
    if lambda.im.abs() <= 1e-12 * (1.0 + lambda.norm()) {
        let big = target
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or(Complex64::new(1.0, 0.0));
        let phase = big.conj() / big.norm().max(f64::MIN_POSITIVE);
        return target.iter().map(|z| FPoly(vec![(z * phase).re])).collect();
    }
    target
        .iter()
        .map(|z| {
            let b = z.im / lambda.im;
            let a = z.re - b * lambda.re;
            FPoly(vec![a, b])
        })
        .collect()
}

/// Condition 3 read through the decomposition: with Ψ = M⋆N + N⋆M and V_Ψ
/// its syzygy, V_Ψ·(M⋆Y + N⋆X) must be divisible on the right by F. Valid
/// when condition 2 holds.
pub fn condition3_via_decomposition(p: &PolyMat, q: &PolyMat) -> Result<Status> {
    let dec = decompose(p, q)?;
    let psi = &(&dec.m.star() * &dec.n) + &(&dec.n.star() * &dec.m);
    let v = syzygy_basis(&psi);
    if v.is_empty() {
        return Ok(Status::Pass);
    }
    let a = &v.v * &(&(&dec.m.star() * &dec.y) + &(&dec.n.star() * &dec.x));
    Ok(if divisible_on_right(&a, &dec.f)?.is_some() {
        Status::Pass
    } else {
        Status::Fail
    })
}

/// Runs conditions 2, 1 and 3 (all three are always reported).
pub fn check_pair(p: &PolyMat, q: &PolyMat) -> Result<PRPairVerdict> {
    check_pair_with(p, q, &CheckOptions::default())
}

pub fn check_pair_with(p: &PolyMat, q: &PolyMat, opts: &CheckOptions) -> Result<PRPairVerdict> {
    check_square(p, q)?;
    let tol = &opts.tol;
    let (cond2, witness2, mut notes) = check_condition2(p, q, tol)?;
    let (cond1, witness1, n1) = check_condition1(p, q, tol)?;
    let (cond3, witness3, n3) = check_condition3(p, q, tol)?;
    notes.extend(n1);
    notes.extend(n3);
    let cross_check = if opts.cross_check {
        if cond2 == Status::Pass {
            let direct = condition3_via_decomposition(p, q)?;
            Some(CrossCheck {
                applicable: true,
                direct: Some(direct),
                agrees: direct == cond3,
            })
        } else {
            Some(CrossCheck {
                applicable: false,
                direct: None,
                agrees: true,
            })
        }
    } else {
        None
    };
    Ok(PRPairVerdict {
        overall: Status::combine(&[cond1, cond2, cond3]),
        cond1,
        cond2,
        cond3,
        witness1,
        witness2,
        witness3,
        cross_check,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &[i64]) -> PolyMat {
        PolyMat::scalar(Poly::from_ints(c))
    }

    fn transformer() -> (PolyMat, PolyMat) {
        (
            PolyMat::from_ints(&[&[&[], &[]], &[&[2], &[1]]]),
            PolyMat::from_ints(&[&[&[1], &[-2]], &[&[], &[]]]),
        )
    }

    fn opts() -> CheckOptions {
        CheckOptions {
            cross_check: true,
            ..Default::default()
        }
    }

    #[test]
    fn example23_fails_condition2_at_j() {
        // (ξ²+1)(ξ+1), (ξ²+1)ξ
        let p = s(&[1, 1, 1, 1]);
        let q = s(&[0, 1, 0, 1]);
        let v = check_pair_with(&p, &q, &opts()).unwrap();
        assert_eq!(v.cond2, Status::Fail);
        assert_eq!(v.overall, Status::Fail);
        let w = v.witness2.unwrap();
        assert!(w.lambda.re.abs() < 1e-6 && (w.lambda.im.abs() - 1.0).abs() < 1e-6);
        assert_eq!(v.cond1, Status::Pass);
    }

    #[test]
    fn controllable_part_passes() {
        let v = check_pair_with(&s(&[1, 1]), &s(&[0, 1]), &opts()).unwrap();
        assert_eq!(v.overall, Status::Pass);
        assert!(v.cross_check.unwrap().agrees);
    }

    #[test]
    fn transformer_passes() {
        let (p, q) = transformer();
        assert!(para_hermitian(&p, &q).is_zero());
        let v = check_pair_with(&p, &q, &opts()).unwrap();
        assert_eq!(v.overall, Status::Pass);
        assert!(v.cross_check.unwrap().agrees);
    }

    #[test]
    fn axis_indefinite_pair() {
        let p = PolyMat::from_ints(&[&[&[], &[1, 1]], &[&[], &[]]]);
        let q = PolyMat::from_ints(&[&[&[], &[]], &[&[], &[2, 1]]]);
        let (st, w, _) = check_condition1(&p, &q, &Tolerance::default()).unwrap();
        assert_eq!(st, Status::Fail);
        let w = w.unwrap();
        assert_eq!(w.stage, Stage::Axis);
        let h = para_hermitian(&p, &q).eval_c64(w.lambda);
        assert!(quad(&h, &w.z) < 0.0);
    }

    #[test]
    fn hidden_lossless_mode_fails_condition3() {
        let p = s(&[1, 1]);
        let q = s(&[0, 1, 1]);
        let v = check_pair_with(&p, &q, &opts()).unwrap();
        assert_eq!(v.cond3, Status::Fail);
        assert_eq!(v.cond2, Status::Pass);
        assert!(v.cross_check.unwrap().agrees);
        let w = v.witness3.unwrap();
        assert!((w.lambda - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
        assert!(w.residual < 1e-8);
    }

    #[test]
    fn condition3_examples() {
        let t = Tolerance::default();
        assert_eq!(check_condition3(&s(&[1, 2, 1]), &s(&[0, 1, 1]), &t).unwrap().0, Status::Pass);
        assert_eq!(check_condition3(&s(&[1]), &s(&[0, 1]), &t).unwrap().0, Status::Pass);
    }

    #[test]
    fn identity_pair_passes() {
        let i = PolyMat::identity(2);
        assert_eq!(para_hermitian(&i, &i), PolyMat::identity(2).scale(&crate::exactalg::rat(2)));
        assert!(check_pair(&i, &i).unwrap().passes());
    }

    #[test]
    fn unstable_coprime_pair_fails_condition1_off_axis() {
        // negative capacitor: Φ ≡ 0 on the axis, det(P+Q) = 1 - ξ
        let p = s(&[1]);
        let q = s(&[0, -1]);
        let (st, w, _) = check_condition1(&p, &q, &Tolerance::default()).unwrap();
        assert_eq!(st, Status::Fail);
        let w = w.unwrap();
        assert!(w.lambda.re >= 0.0 && w.value < 0.0);
    }

    #[test]
    fn negative_resistor_fails_on_axis() {
        let (st, _, _) = check_condition1(&s(&[1]), &s(&[-1]), &Tolerance::default()).unwrap();
        assert_eq!(st, Status::Fail);
    }

    #[test]
    fn zero_pair_is_condition2_failure() {
        let z = PolyMat::zeros(1, 1);
        let v = check_pair(&z, &z).unwrap();
        assert_eq!(v.cond2, Status::Fail);
        assert!(v.witness2.unwrap().explanation.contains("normalrank"));
    }
}
