//! Dense matrices of rational polynomials.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{Poly, Rat, RatMatrix};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMat {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl PolyMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMat {
            rows,
            cols,
            data: vec![Poly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Poly::one() } else { Poly::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        PolyMat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Dimension("ragged polynomial matrix".into()));
        }
        let data = rows.into_iter().flatten().collect();
        Ok(PolyMat {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Integer coefficients, `m[i][j]` is the low-to-high coefficient list.
    pub fn from_ints(m: &[&[&[i64]]]) -> Self {
        let r = m.len();
        let c = m.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, |i, j| Poly::from_ints(m[i][j]))
    }

    pub fn scalar(p: Poly) -> Self {
        PolyMat {
            rows: 1,
            cols: 1,
            data: vec![p],
        }
    }

    pub fn constant(m: &RatMatrix) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| Poly::constant(m[(i, j)].clone()))
    }

    /// ξI − A
    pub fn resolvent_pencil(a: &RatMatrix) -> Self {
        let n = a.nrows();
        Self::from_fn(n, n, |i, j| {
            let mut c = vec![-a[(i, j)].clone()];
            if i == j {
                c.push(Rat::one());
            }
            Poly::new(c)
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// R⋆(ξ) = R(−ξ)ᵀ
    pub fn star(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).star())
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        PolyMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, a: &Rat) -> Self {
        self.map(|p| p.scale(a))
    }

    pub fn mul_poly(&self, q: &Poly) -> Self {
        self.map(|p| p * q)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.data.iter().filter_map(|p| p.degree()).max()
    }

    pub fn row_degree(&self, i: usize) -> Option<usize> {
        (0..self.cols).filter_map(|j| self.get(i, j).degree()).max()
    }

    pub fn col_degree(&self, j: usize) -> Option<usize> {
        (0..self.rows).filter_map(|i| self.get(i, j).degree()).max()
    }

    /// Matrix of coefficients of ξ^k.
    pub fn coeff_matrix(&self, k: usize) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).coeff(k))
    }

    /// Row i holds the coefficients of ξ^{row degree i}; zero rows stay zero.
    pub fn leading_row_coeffs(&self) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |i, j| match self.row_degree(i) {
            Some(d) => self.get(i, j).coeff(d),
            None => Rat::zero(),
        })
    }

    pub fn to_constant(&self) -> Option<RatMatrix> {
        self.data
            .iter()
            .all(|p| p.is_constant())
            .then(|| self.coeff_matrix(0))
    }

    pub fn hstack(&self, o: &PolyMat) -> Self {
        assert_eq!(self.rows, o.rows, "hstack row mismatch");
        Self::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                o.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, o: &PolyMat) -> Self {
        assert_eq!(self.cols, o.cols, "vstack column mismatch");
        Self::from_fn(self.rows + o.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                o.get(i - self.rows, j).clone()
            }
        })
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, cols)
    }

    pub fn eval_c64(&self, z: Complex64) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval_c64(z))
    }

    pub fn eval_rat(&self, t: &Rat) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval(t))
    }

    pub fn derivative(&self) -> Self {
        self.map(|p| p.derivative())
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row_dst += q · row_src
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, q: &Poly) {
        for j in 0..self.cols {
            let v = self.get(src, j) * q;
            if !v.is_zero() {
                let idx = dst * self.cols + j;
                self.data[idx] = &self.data[idx] + &v;
            }
        }
    }

    /// col_dst += q · col_src
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, q: &Poly) {
        for i in 0..self.rows {
            let v = self.get(i, src) * q;
            if !v.is_zero() {
                let idx = i * self.cols + dst;
                self.data[idx] = &self.data[idx] + &v;
            }
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, a: &Rat) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = self.data[idx].scale(a);
        }
    }

    pub(crate) fn scale_col(&mut self, j: usize, a: &Rat) {
        for i in 0..self.rows {
            let idx = i * self.cols + j;
            self.data[idx] = self.data[idx].scale(a);
        }
    }
}

impl fmt::Debug for PolyMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Display for PolyMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Mul for &PolyMat {
    type Output = PolyMat;
    fn mul(self, o: &PolyMat) -> PolyMat {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        PolyMat::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = Poly::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = o.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        })
    }
}

impl Add for &PolyMat {
    type Output = PolyMat;
    fn add(self, o: &PolyMat) -> PolyMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "dimension mismatch in sum");
        PolyMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + o.get(i, j))
    }
}

impl Sub for &PolyMat {
    type Output = PolyMat;
    fn sub(self, o: &PolyMat) -> PolyMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "dimension mismatch in difference");
        PolyMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - o.get(i, j))
    }
}

impl Neg for &PolyMat {
    type Output = PolyMat;
    fn neg(self) -> PolyMat {
        self.map(|p| -p)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PolyMat {
            type Output = PolyMat;
            fn $m(self, o: PolyMat) -> PolyMat {
                (&self).$m(&o)
            }
        }
        impl $tr<&PolyMat> for PolyMat {
            type Output = PolyMat;
            fn $m(self, o: &PolyMat) -> PolyMat {
                (&self).$m(o)
            }
        }
        impl $tr<PolyMat> for &PolyMat {
            type Output = PolyMat;
            fn $m(self, o: PolyMat) -> PolyMat {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PolyMat {
    type Output = PolyMat;
    fn neg(self) -> PolyMat {
        -&self
    }
}

/// Exact determinant: cofactor expansion below size 4, fraction-free
/// (Bareiss) elimination from there on.
pub fn det(a: &PolyMat) -> Poly {
    assert!(a.is_square(), "determinant of a non-square matrix");
    let n = a.rows();
    match n {
        0 => Poly::one(),
        1 => a.get(0, 0).clone(),
        2 => a.get(0, 0) * a.get(1, 1) - a.get(0, 1) * a.get(1, 0),
        3 => {
            let mut acc = Poly::zero();
            for j in 0..3 {
                let minor = a.select(&[1, 2], &(0..3).filter(|&c| c != j).collect::<Vec<_>>());
                let term = a.get(0, j) * det(&minor);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
        _ => bareiss(a),
    }
}

fn bareiss(a: &PolyMat) -> Poly {
    let n = a.rows();
    let mut m = a.clone();
    let mut sign = Rat::one();
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if m.get(k, k).is_zero() {
            match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                Some(p) => {
                    m.swap_rows(k, p);
                    sign = -sign;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j);
                let q = num.div_exact(&prev).expect("Bareiss division is exact");
                m.set(i, j, q);
            }
            m.set(i, k, Poly::zero());
        }
        prev = m.get(k, k).clone();
    }
    m.get(n - 1, n - 1).scale(&sign)
}

/// Classical adjoint, so that A·adj(A) = det(A)·I.
pub fn adjugate(a: &PolyMat) -> PolyMat {
    let n = a.rows();
    if n == 1 {
        return PolyMat::identity(1);
    }
    PolyMat::from_fn(n, n, |i, j| {
        let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
        let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
        let d = det(&a.select(&rows, &cols));
        if (i + j) % 2 == 0 {
            d
        } else {
            -d
        }
    })
}

/// Every `k`-subset of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for s in start..n {
            if n - s < k - cur.len() {
                break;
            }
            cur.push(s);
            rec(s + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All determinants built from `rows` columns of a wide matrix.
pub fn maximal_minors(r: &PolyMat) -> Vec<(Vec<usize>, Poly)> {
    subsets(r.cols(), r.rows())
        .into_iter()
        .map(|s| {
            let d = det(&r.select_cols(&s));
            (s, d)
        })
        .collect()
}

pub fn is_unimodular(u: &PolyMat) -> bool {
    u.is_square() && {
        let d = det(u);
        !d.is_zero() && d.is_constant()
    }
}



#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_examples() {
        assert_eq!(det(&PolyMat::identity(2)), Poly::one());
        let d = PolyMat::from_ints(&[&[&[1, 1], &[]], &[&[], &[-2, -1]]]);
        assert_eq!(det(&d), -(Poly::from_ints(&[1, 1]) * Poly::from_ints(&[2, 1])));
        let r = PolyMat::from_ints(&[&[&[0, 1], &[1]], &[&[-1], &[0, 1]]]);
        assert_eq!(det(&r), Poly::from_ints(&[1, 0, 1]));
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let a = PolyMat::from_ints(&[
            &[&[1, 1], &[2], &[0, 1], &[3]],
            &[&[0], &[1, 0, 1], &[1], &[-1, 2]],
            &[&[4], &[1], &[2, 1], &[0]],
            &[&[1, -1], &[0, 0, 1], &[5], &[1]],
        ]);
        let mut cof = Poly::zero();
        for j in 0..4 {
            let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
            let t = a.get(0, j) * det(&a.select(&[1, 2, 3], &cols));
            cof = if j % 2 == 0 { &cof + &t } else { &cof - &t };
        }
        assert_eq!(det(&a), cof);
        let adj = adjugate(&a);
        assert_eq!(&a * &adj, PolyMat::identity(4).mul_poly(&det(&a)));
    }

    #[test]
    fn subsets_count() {
        assert_eq!(subsets(6, 3).len(), 20);
        assert_eq!(subsets(4, 2)[0], vec![0, 1]);
    }
}
