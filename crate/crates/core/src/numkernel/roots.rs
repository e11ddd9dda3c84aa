use nalgebra::DMatrix;
use num::complex::Complex64;

use super::tolerance::{RegionTag, Tolerance};
use crate::error::{Error, Result};
use crate::exactalg::{to_f64, Poly};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
    pub region: RegionTag,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Root>,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn in_region(&self, tag: RegionTag) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(move |r| r.region == tag)
    }
}

/// Roots of a monic square-free polynomial from its companion matrix,
/// refined by a few Newton steps.
pub fn simple_roots(p: &[f64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = p[n];
    if n == 1 {
        return vec![Complex64::new(-p[0] / lead, 0.0)];
    }
    let comp = DMatrix::from_fn(n, n, |i, j| {
        if i == 0 {
            -p[n - 1 - j] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let eval = |z: Complex64| {
        p.iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    };
    let deval = |z: Complex64| {
        p.iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, &a)| acc * z + a * k as f64)
    };
    super::linalg::eigenvalues(&comp)
        .into_iter()
        .map(|z0| {
            let mut z = z0;
            for _ in 0..4 {
                let d = deval(z);
                if d.norm() == 0.0 {
                    break;
                }
                let next = z - eval(z) / d;
                if eval(next).norm() <= eval(z).norm() {
                    z = next;
                } else {
                    break;
                }
            }
            if z.im.abs() <= 1e-14 * (1.0 + z.norm()) {
                z.im = 0.0;
            }
            z
        })
        .collect()
}

/// Simultaneous Aberth–Ehrlich iteration on all roots; the fallback when
/// the companion eigenvalue iteration fails.
pub(crate) fn aberth(p: &[f64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let lead = p[n];
    let c: Vec<f64> = p.iter().map(|v| v / lead).collect();
    let radius = 1.0 + c[..n].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    let eval = |x: Complex64| {
        c.iter().rev().fold((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)), |(v, d), &a| {
            (v * x + a, d * x + v)
        })
    };
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for i in 0..n {
            let (v, d) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let sum: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            z[i] -= step;
            moved = moved.max(step.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// All complex roots with multiplicities taken from the exact square-free
/// decomposition.
pub fn roots(p: &Poly, tol: &Tolerance) -> Result<RootSet> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (i, f) in p.square_free_decomposition().iter().enumerate() {
        let c: Vec<f64> = f.coeffs().iter().map(to_f64).collect();
        for z in simple_roots(&c) {
            out.push(Root {
                value: z,
                multiplicity: i + 1,
                region: tol.classify(z),
            });
        }
    }
    out.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    Ok(RootSet { roots: out })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_examples() {
        let t = Tolerance::default();
        let r = roots(&Poly::from_ints(&[1, 0, 1]), &t).unwrap();
        assert_eq!(r.roots.len(), 2);
        for x in &r.roots {
            assert_eq!(x.region, RegionTag::Axis);
            assert!((x.value.im.abs() - 1.0).abs() < 1e-12);
        }
        let r = roots(&Poly::from_ints(&[1, 2, 1]), &t).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert_eq!(r.roots[0].multiplicity, 2);
        assert_eq!(r.roots[0].region, RegionTag::OpenLhp);
        let r = roots(&Poly::from_ints(&[-2, 0, 1]), &t).unwrap();
        let s = std::f64::consts::SQRT_2;
        assert!((r.roots[0].value.re + s).abs() < 1e-12);
        assert!((r.roots[1].value.re - s).abs() < 1e-12);
        assert_eq!(r.roots[1].region, RegionTag::OpenRhp);
        assert!(roots(&Poly::zero(), &t).is_err());
    }

    #[test]
    fn stalling_companion_terminates() {
        let t = Tolerance::default();
        let r = roots(&Poly::from_ints(&[-24, 0, 10, 0, -2]), &t).unwrap();
        assert_eq!(r.roots.len(), 4);
        assert!(r.roots.iter().all(|x| x.value.im.abs() > 0.5));
    }

    #[test]
    fn aberth_matches_known_roots() {
        let mut z = aberth(&[12.0, 0.0, -5.0, 0.0, 1.0]);
        z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        for w in &z {
            assert!((w * w * w * w - w * w * 5.0 + 12.0).norm() < 1e-10);
        }
    }
}
