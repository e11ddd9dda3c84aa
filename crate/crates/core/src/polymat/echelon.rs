//! Unimodular reductions: echelon and row/column-reduced forms.

use num::{One, Zero};

use super::matrix::PolyMat;
use crate::exactalg::{Poly, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EchelonForm {
    /// U·R = [E; 0], E in upper row echelon form.
    UpperRow,
    /// R·U = [E 0], E in lower column echelon form.
    LowerColumn,
    /// U·R = [E; 0], E row reduced.
    RowReduced,
    /// R·U = [E 0], E column reduced.
    ColumnReduced,
}

/// Result of a reduction. For row forms `u·input = [e; 0]`; for column
/// forms `input·u = [e 0]`. `u_inv` is the exact inverse of `u`.
#[derive(Clone, Debug)]
pub struct EchelonResult {
    pub form: EchelonForm,
    pub u: PolyMat,
    pub u_inv: PolyMat,
    pub e: PolyMat,
    pub rank: usize,
}

/// Row-operation tracker keeping U and U⁻¹ in step with the working matrix.
struct RowOps {
    m: PolyMat,
    u: PolyMat,
    u_inv: PolyMat,
}

impl RowOps {
    fn new(r: &PolyMat) -> Self {
        let l = r.rows();
        RowOps {
            m: r.clone(),
            u: PolyMat::identity(l),
            u_inv: PolyMat::identity(l),
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    /// row_dst += q · row_src
    fn add(&mut self, dst: usize, src: usize, q: &Poly) {
        self.m.add_row_multiple(dst, src, q);
        self.u.add_row_multiple(dst, src, q);
        self.u_inv.add_col_multiple(src, dst, &-q);
    }

    fn scale(&mut self, i: usize, a: &Rat) {
        self.m.scale_row(i, a);
        self.u.scale_row(i, a);
        self.u_inv.scale_col(i, &(Rat::one() / a));
    }
}

fn upper_row(r: &PolyMat) -> (RowOps, usize) {
    let mut ops = RowOps::new(r);
    let (l, k) = (r.rows(), r.cols());
    let mut rank = 0;
    for c in 0..k {
        if rank == l {
            break;
        }
        loop {
            let pivot = (rank..l)
                .filter(|&i| !ops.m.get(i, c).is_zero())
                .min_by_key(|&i| (ops.m.get(i, c).degree(), i));
            let Some(p) = pivot else { break };
            ops.swap(rank, p);
            let mut clean = true;
            for i in rank + 1..l {
                if ops.m.get(i, c).is_zero() {
                    continue;
                }
                let (q, rem) = ops.m.get(i, c).divmod(ops.m.get(rank, c));
                ops.add(i, rank, &-q);
                if !rem.is_zero() {
                    clean = false;
                }
            }
            if clean {
                let lead = ops.m.get(rank, c).lead();
                ops.scale(rank, &(Rat::one() / lead));
                rank += 1;
                break;
            }
        }
    }
    (ops, rank)
}

/// Reduce the first `rank` rows until their leading row coefficient matrix
/// has full row rank.
fn row_reduce(ops: &mut RowOps, rank: usize) {
    loop {
        let top = ops.m.block(0, 0, rank, ops.m.cols());
        let lc = top.leading_row_coeffs();
        let null = lc.transpose().nullspace();
        if null.ncols() == 0 {
            return;
        }
        let a: Vec<Rat> = (0..rank).map(|i| null[(i, 0)].clone()).collect();
        let degs: Vec<usize> = (0..rank).map(|i| top.row_degree(i).unwrap_or(0)).collect();
        let star = (0..rank)
            .filter(|&i| !a[i].is_zero())
            .max_by_key(|&i| (degs[i], std::cmp::Reverse(i)))
            .expect("null vector is nonzero");
        for i in 0..rank {
            if i == star || a[i].is_zero() {
                continue;
            }
            let q = Poly::monomial(&a[i] / &a[star], degs[star] - degs[i]);
            ops.add(star, i, &q);
        }
    }
}

fn transpose_result(res: EchelonResult, form: EchelonForm) -> EchelonResult {
    EchelonResult {
        form,
        u: res.u.transpose(),
        u_inv: res.u_inv.transpose(),
        e: res.e.transpose(),
        rank: res.rank,
    }
}

/// Unimodular reduction of `r` to the requested form. Pivots are chosen
/// with minimal degree, ties going to the lowest row index.
pub fn echelon(r: &PolyMat, form: EchelonForm) -> EchelonResult {
    match form {
        EchelonForm::UpperRow | EchelonForm::RowReduced => {
            let (mut ops, rank) = upper_row(r);
            if form == EchelonForm::RowReduced && rank > 0 {
                row_reduce(&mut ops, rank);
            }
            let e = ops.m.block(0, 0, rank, r.cols());
            EchelonResult {
                form,
                u: ops.u,
                u_inv: ops.u_inv,
                e,
                rank,
            }
        }
        EchelonForm::LowerColumn => {
            transpose_result(echelon(&r.transpose(), EchelonForm::UpperRow), form)
        }
        EchelonForm::ColumnReduced => {
            transpose_result(echelon(&r.transpose(), EchelonForm::RowReduced), form)
        }
    }
}

/// Row-reduce a nonsingular square matrix in place of its rows, returning
/// (U, U·q) with U unimodular and U·q row reduced.
pub fn row_reduced_square(q: &PolyMat) -> (PolyMat, PolyMat) {
    let mut ops = RowOps::new(q);
    row_reduce(&mut ops, q.rows());
    (ops.u, ops.m)
}

pub fn normalrank(r: &PolyMat) -> usize {
    upper_row(r).1
}

