//! Polynomials and polynomial matrices with floating-point coefficients,
//! used for spectral factors whose coefficients are irrational.

use nalgebra::DMatrix;
use num::complex::Complex64;

use crate::exactalg::Poly;
use crate::polymat::PolyMat;

#[derive(Clone, Debug, PartialEq, Default)]
pub struct FPoly(pub Vec<f64>);

impl FPoly {
    pub fn from_exact(p: &Poly) -> Self {
        FPoly(p.to_f64_coeffs())
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|&x| x != 0.0)
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.0.get(k).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    pub fn star(&self) -> FPoly {
        FPoly(
            self.0
                .iter()
                .enumerate()
                .map(|(k, &a)| if k % 2 == 1 { -a } else { a })
                .collect(),
        )
    }

    pub fn mul(&self, o: &FPoly) -> FPoly {
        if self.0.is_empty() || o.0.is_empty() {
            return FPoly(Vec::new());
        }
        let mut c = vec![0.0; self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        FPoly(c)
    }

    pub fn add(&self, o: &FPoly) -> FPoly {
        let n = self.0.len().max(o.0.len());
        FPoly((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    /// j-th Taylor coefficient at z: (1/j!)·p^{(j)}(z).
    pub fn taylor(&self, z: Complex64, j: usize) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (j..self.0.len()).rev() {
            acc = acc * z + self.0[k] * binom(k, j);
        }
        acc
    }
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FPolyMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<FPoly>,
}

impl FPolyMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FPolyMat {
            rows,
            cols,
            data: vec![FPoly::default(); rows * cols],
        }
    }

    pub fn from_exact(m: &PolyMat) -> Self {
        FPolyMat {
            rows: m.rows(),
            cols: m.cols(),
            data: m.entries().iter().map(FPoly::from_exact).collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &FPoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: FPoly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn star(&self) -> FPolyMat {
        let mut out = FPolyMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).star());
            }
        }
        out
    }

    pub fn mul(&self, o: &FPolyMat) -> FPolyMat {
        assert_eq!(self.cols, o.rows);
        let mut out = FPolyMat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = FPoly::default();
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(o.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn eval(&self, z: Complex64) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval(z))
    }

    pub fn taylor(&self, z: Complex64, j: usize) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c).taylor(z, j))
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.data.iter().filter_map(|p| p.degree()).max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taylor_coefficients() {
        // p = 1 + 2z + 3z^2 at z = 1: p = 6, p' = 8, p''/2 = 3
        let p = FPoly(vec![1.0, 2.0, 3.0]);
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(p.taylor(one, 0).re, 6.0);
        assert_eq!(p.taylor(one, 1).re, 8.0);
        assert_eq!(p.taylor(one, 2).re, 3.0);
        assert_eq!(p.taylor(one, 3).re, 0.0);
    }
}
