//! Two-variable polynomials Φ(ξ, η) carrying bilinear differential forms.

use num::{One, Zero};

use super::poly::Poly;
use super::rat::{to_f64, Rat};
use crate::polymat::PolyMat;

/// Grid of coefficients, `c[i][j]` multiplies ξ^i η^j.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TwoVarPoly {
    c: Vec<Vec<Rat>>,
}

impl TwoVarPoly {
    pub fn new(mut c: Vec<Vec<Rat>>) -> Self {
        let width = c.iter().map(|r| r.len()).max().unwrap_or(0);
        for r in c.iter_mut() {
            r.resize(width, Rat::zero());
        }
        while c.last().is_some_and(|r| r.iter().all(|x| x.is_zero())) {
            c.pop();
        }
        let keep = (0..width)
            .rev()
            .find(|&j| c.iter().any(|r| !r[j].is_zero()))
            .map_or(0, |j| j + 1);
        for r in c.iter_mut() {
            r.truncate(keep);
        }
        if keep == 0 {
            c.clear();
        }
        TwoVarPoly { c }
    }

    pub fn zero() -> Self {
        TwoVarPoly { c: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// (degree in ξ + 1, degree in η + 1)
    pub fn shape(&self) -> (usize, usize) {
        (self.c.len(), self.c.first().map_or(0, |r| r.len()))
    }

    pub fn coeff(&self, i: usize, j: usize) -> Rat {
        self.c
            .get(i)
            .and_then(|r| r.get(j))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn grid(&self) -> &[Vec<Rat>] {
        &self.c
    }

    /// p(ξ) viewed as a two-variable polynomial.
    pub fn from_xi(p: &Poly) -> Self {
        TwoVarPoly::new(p.coeffs().iter().map(|a| vec![a.clone()]).collect())
    }

    /// p(η) viewed as a two-variable polynomial.
    pub fn from_eta(p: &Poly) -> Self {
        TwoVarPoly::new(vec![p.coeffs().to_vec()])
    }

    fn zip(&self, o: &Self, f: impl Fn(Rat, Rat) -> Rat) -> Self {
        let (a1, b1) = self.shape();
        let (a2, b2) = o.shape();
        let (a, b) = (a1.max(a2), b1.max(b2));
        TwoVarPoly::new(
            (0..a)
                .map(|i| (0..b).map(|j| f(self.coeff(i, j), o.coeff(i, j))).collect())
                .collect(),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |x, y| x + y)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |x, y| x - y)
    }

    /// (ξ + η)·self
    pub fn mul_xi_plus_eta(&self) -> Self {
        let (a, b) = self.shape();
        TwoVarPoly::new(
            (0..=a)
                .map(|i| {
                    (0..=b)
                        .map(|j| {
                            let l = if i > 0 { self.coeff(i - 1, j) } else { Rat::zero() };
                            let r = if j > 0 { self.coeff(i, j - 1) } else { Rat::zero() };
                            l + r
                        })
                        .collect()
                })
                .collect(),
        )
    }

    pub fn eval(&self, xi: &Rat, eta: &Rat) -> Rat {
        let mut acc = Rat::zero();
        let mut xp = Rat::one();
        for row in &self.c {
            let mut ep = Rat::one();
            for a in row {
                acc += a * &xp * &ep;
                ep *= eta;
            }
            xp *= xi;
        }
        acc
    }

    /// Σ w^{(i)} Φ_ij x^{(j)} for scalar signals given by their derivative
    /// stacks at one instant.
    pub fn bilinear(&self, w_derivs: &[f64], x_derivs: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (i, row) in self.c.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    acc += w_derivs[i] * to_f64(a) * x_derivs[j];
                }
            }
        }
        acc
    }
}

/// Matrix with two-variable polynomial entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwoVarMat {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<TwoVarPoly>,
}

impl TwoVarMat {
    pub fn get(&self, i: usize, j: usize) -> &TwoVarPoly {
        &self.entries[i * self.cols + j]
    }
}

/// Φ_R(ξ, η) = (R(ξ) − R(−η)) / (ξ + η), entrywise.
///
/// For r = Σ r_k ξ^k the quotient of (ξ^k − (−η)^k) by (ξ + η) is
/// Σ_{i+j=k−1} ξ^i (−η)^j, so the division never needs to be carried out.
pub fn bdf_phi(r: &PolyMat) -> TwoVarMat {
    let entries = (0..r.rows())
        .flat_map(|i| (0..r.cols()).map(move |j| (i, j)))
        .map(|(i, j)| bdf_phi_scalar(r.get(i, j)))
        .collect();
    TwoVarMat {
        rows: r.rows(),
        cols: r.cols(),
        entries,
    }
}

pub fn bdf_phi_scalar(p: &Poly) -> TwoVarPoly {
    let n = p.coeffs().len();
    let mut g = vec![vec![Rat::zero(); n]; n];
    for (k, a) in p.coeffs().iter().enumerate().skip(1) {
        for i in 0..k {
            let j = k - 1 - i;
            let s = if j % 2 == 0 { a.clone() } else { -a.clone() };
            g[i][j] += s;
        }
    }
    TwoVarPoly::new(g)
}

/// R(ξ) − R(−η) as a two-variable polynomial; used to check Φ_R.
pub fn bdf_numerator(p: &Poly) -> TwoVarPoly {
    TwoVarPoly::from_xi(p).sub(&TwoVarPoly::from_eta(&p.star()))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::rat;

    #[test]
    fn phi_examples() {
        // R = ξ gives Φ = 1
        let phi = bdf_phi_scalar(&Poly::x());
        assert_eq!(phi, TwoVarPoly::new(vec![vec![rat(1)]]));
        assert!(bdf_phi_scalar(&Poly::from_ints(&[7])).is_zero());
        // R = ξ² gives ξ − η
        let phi = bdf_phi_scalar(&Poly::from_ints(&[0, 0, 1]));
        assert_eq!(phi.coeff(1, 0), rat(1));
        assert_eq!(phi.coeff(0, 1), rat(-1));
        assert_eq!(phi.shape(), (2, 2));
    }

    #[test]
    fn phi_times_sum_is_numerator() {
        let p = Poly::from_ints(&[3, -1, 4, 1, -5, 9]);
        assert_eq!(bdf_phi_scalar(&p).mul_xi_plus_eta(), bdf_numerator(&p));
    }
}
