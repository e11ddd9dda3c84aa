//! Behavior-level constructions: the controllable/autonomous decomposition,
//! the passive input-output partition and the behavior-level verdict.

mod partition;

pub use partition::{behavior_is_passive, passive_partition, Partition};

use num::One;

use crate::error::{Error, Result};
use crate::exactalg::Rat;
use crate::polymat::{adjugate, det, echelon, is_unimodular, EchelonForm, PolyMat};

/// P = F·P̃, Q = F·Q̃, with
/// [[P̃, −Q̃], [U, V]]·[[X, M], [Y, N]] = I = [[X, M], [Y, N]]·[[P̃, −Q̃], [U, V]].
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub f: PolyMat,
    pub ptil: PolyMat,
    pub qtil: PolyMat,
    pub m: PolyMat,
    pub n: PolyMat,
    pub u: PolyMat,
    pub v: PolyMat,
    pub x: PolyMat,
    pub y: PolyMat,
}

fn blocks(a: &PolyMat, b: &PolyMat, c: &PolyMat, d: &PolyMat) -> PolyMat {
    a.hstack(b).vstack(&c.hstack(d))
}

impl Decomposition {
    /// [[P̃, −Q̃], [U, V]]
    pub fn w_hat(&self) -> PolyMat {
        blocks(&self.ptil, &-&self.qtil, &self.u, &self.v)
    }

    /// [[X, M], [Y, N]]
    pub fn w(&self) -> PolyMat {
        blocks(&self.x, &self.m, &self.y, &self.n)
    }

    /// Checks P = F·P̃, Q = F·Q̃ and both products of the block matrices.
    pub fn verify(&self, p: &PolyMat, q: &PolyMat) -> bool {
        let n2 = 2 * p.rows();
        let eye = PolyMat::identity(n2);
        &self.f * &self.ptil == *p
            && &self.f * &self.qtil == *q
            && &self.w_hat() * &self.w() == eye
            && &self.w() * &self.w_hat() == eye
    }
}

/// Splits the behavior of (P, Q) through a lower column echelon form
/// [F 0] = [P −Q]·W.
pub fn decompose(p: &PolyMat, q: &PolyMat) -> Result<Decomposition> {
    let n = p.rows();
    if !p.is_square() || !q.is_square() || q.rows() != n {
        return Err(Error::Dimension("P and Q must be square of equal size".into()));
    }
    let r = p.hstack(&-q);
    let res = echelon(&r, EchelonForm::LowerColumn);
    if res.rank < n {
        return Err(Error::NormalrankDeficient { rank: res.rank, n });
    }
    let mut f = res.e.clone();
    let w = res.u;
    let wh = res.u_inv;
    let mut ptil = wh.block(0, 0, n, n);
    let mut qtil = -&wh.block(0, n, n, n);
    let mut x = w.block(0, 0, n, n);
    let mut y = w.block(n, 0, n, n);
    if is_unimodular(&f) {
        let d = det(&f).lead();
        let finv = adjugate(&f).scale(&(Rat::one() / d));
        ptil = &f * &ptil;
        qtil = &f * &qtil;
        x = &x * &finv;
        y = &y * &finv;
        f = PolyMat::identity(n);
    } else {
        let c = det(&f).lead();
        if !c.is_one() {
            let mut s = vec![Rat::one(); n];
            s[0] = c.clone();
            let inv = Rat::one() / &c;
            for i in 0..n {
                f.set(i, 0, f.get(i, 0).scale(&inv));
                x.set(i, 0, x.get(i, 0).scale(&inv));
                y.set(i, 0, y.get(i, 0).scale(&inv));
            }
            for j in 0..n {
                ptil.set(0, j, ptil.get(0, j).scale(&c));
                qtil.set(0, j, qtil.get(0, j).scale(&c));
            }
        }
    }
    let dec = Decomposition {
        f,
        ptil,
        qtil,
        m: w.block(0, n, n, n),
        n: w.block(n, n, n, n),
        u: wh.block(n, 0, n, n),
        v: wh.block(n, n, n, n),
        x,
        y,
    };
    if !dec.verify(p, q) {
        return Err(Error::VerificationFailed("decomposition identities".into()));
    }
    Ok(dec)
}

/// Image representation i = M(d/dt)w, v = N(d/dt)w of the controllable part.
pub fn image_representation(dec: &Decomposition) -> Result<(PolyMat, PolyMat)> {
    let lhs = &dec.ptil * &dec.m;
    let rhs = &dec.qtil * &dec.n;
    if lhs != rhs {
        return Err(Error::VerificationFailed("P̃·M ≠ Q̃·N".into()));
    }
    Ok((dec.m.clone(), dec.n.clone()))
}
