//! Univariate polynomials over the rationals, coefficients stored low to high.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::complex::Complex64;
use num::{Complex, One, Signed, Zero};

use super::rat::{fmt_rat, rat, to_f64, Rat};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<Rat>,
}

impl Poly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { c: vec![Rat::one()] }
    }

    pub fn constant(a: Rat) -> Self {
        Poly::new(vec![a])
    }

    /// The indeterminate ξ.
    pub fn x() -> Self {
        Poly::monomial(Rat::one(), 1)
    }

    pub fn monomial(a: Rat, k: usize) -> Self {
        let mut c = vec![Rat::zero(); k + 1];
        c[k] = a;
        Poly::new(c)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&v| rat(v)).collect())
    }

    /// Product of linear factors `(ξ - r)`.
    pub fn from_roots(roots: &[Rat]) -> Self {
        roots.iter().fold(Poly::one(), |acc, r| {
            &acc * &Poly::new(vec![-r.clone(), Rat::one()])
        })
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.c.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn lead(&self) -> Rat {
        self.c.last().cloned().unwrap_or_else(Rat::zero)
    }

    /// p(-ξ).
    pub fn star(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .map(|(k, a)| if k % 2 == 1 { -a.clone() } else { a.clone() })
                .collect(),
        )
    }

    pub fn scale(&self, a: &Rat) -> Poly {
        Poly::new(self.c.iter().map(|x| x * a).collect())
    }

    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Rat::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * rat(k as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let l = self.lead();
        Poly::new(self.c.iter().map(|x| x / &l).collect())
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| &acc * self)
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        self.c
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, a| acc * t + a)
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        self.c
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + to_f64(a))
    }

    /// Exact evaluation at a Gaussian rational.
    pub fn eval_gauss(&self, z: &Complex<Rat>) -> Complex<Rat> {
        self.c.iter().rev().fold(
            Complex::new(Rat::zero(), Rat::zero()),
            |acc, a| acc * z.clone() + Complex::new(a.clone(), Rat::zero()),
        )
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.c.iter().map(to_f64).collect()
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn divmod(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.c.len() - 1;
        let lead = d.lead();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let f = &r[k + dd] / &lead;
            if !f.is_zero() {
                for (j, dj) in d.c.iter().enumerate() {
                    r[k + j] -= &f * dj;
                }
            }
            q[k] = f;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.divmod(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.divmod(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Yun's algorithm. Returns `a_1, a_2, ...` square-free, pairwise coprime
    /// and monic with `self = lead * prod a_i^i`.
    pub fn square_free_decomposition(&self) -> Vec<Poly> {
        if self.is_constant() {
            return Vec::new();
        }
        let f = self.monic();
        let fp = f.derivative();
        let mut a = Poly::gcd(&f, &fp);
        let mut b = f.div_exact(&a).unwrap();
        let mut c = fp.div_exact(&a).unwrap();
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        loop {
            a = Poly::gcd(&b, &d);
            out.push(a.clone());
            b = b.div_exact(&a).unwrap();
            if b.is_constant() {
                break;
            }
            c = d.div_exact(&a).unwrap();
            d = &c - &b.derivative();
        }
        while out.last().is_some_and(|p| p.is_constant()) {
            out.pop();
        }
        out
    }

    pub fn square_free_part(&self) -> Poly {
        self.square_free_decomposition()
            .iter()
            .fold(Poly::one(), |acc, p| &acc * p)
    }

    /// Real and imaginary parts of p(jω) as real polynomials in ω.
    pub fn axis_parts(&self) -> (Poly, Poly) {
        let mut re = vec![Rat::zero(); self.c.len()];
        let mut im = vec![Rat::zero(); self.c.len()];
        for (k, a) in self.c.iter().enumerate() {
            let v = if (k / 2) % 2 == 0 { a.clone() } else { -a.clone() };
            if k % 2 == 0 {
                re[k] = v;
            } else {
                im[k] = v;
            }
        }
        (Poly::new(re), Poly::new(im))
    }

    /// Exact Routh test: true iff every root lies in the open left half-plane.
    pub fn is_hurwitz(&self) -> bool {
        let n = match self.degree() {
            None => return false,
            Some(n) => n,
        };
        if n == 0 {
            return true;
        }
        let c = if self.lead().is_negative() {
            -self.clone()
        } else {
            self.clone()
        };
        let row = |start: usize| -> Vec<Rat> {
            (0..=n)
                .rev()
                .skip(start)
                .step_by(2)
                .map(|k| c.coeff(k))
                .collect()
        };
        let mut prev = row(0);
        let mut cur = row(1);
        for _ in 0..n {
            let p0 = cur.first().cloned().unwrap_or_else(Rat::zero);
            if !p0.is_positive() {
                return false;
            }
            let get = |v: &Vec<Rat>, i: usize| v.get(i).cloned().unwrap_or_else(Rat::zero);
            let len = prev.len().max(cur.len());
            let next: Vec<Rat> = (0..len.saturating_sub(1))
                .map(|i| (&p0 * get(&prev, i + 1) - &prev[0] * get(&cur, i + 1)) / &p0)
                .collect();
            prev = cur;
            cur = next;
        }
        true
    }
}

/// Sturm sequence of a polynomial.
pub fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone(), p.derivative()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let r = seq[n - 2].divmod(&seq[n - 1]).1;
        seq.push(-r);
    }
    seq.pop();
    seq
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

fn sign_at_pos_inf(p: &Poly) -> i8 {
    if p.lead().is_positive() {
        1
    } else {
        -1
    }
}

fn sign_at_neg_inf(p: &Poly) -> i8 {
    let s = sign_at_pos_inf(p);
    if p.degree().unwrap_or(0) % 2 == 1 {
        -s
    } else {
        s
    }
}

/// Number of distinct real roots.
pub fn count_real_roots(p: &Poly) -> usize {
    if p.is_constant() {
        return 0;
    }
    let seq = sturm_sequence(&p.square_free_part());
    sign_changes(seq.iter().map(sign_at_neg_inf)) - sign_changes(seq.iter().map(sign_at_pos_inf))
}

/// True iff p(t) >= 0 for every real t, decided exactly: the sign can only
/// change across real roots of odd multiplicity, and there are none iff the
/// product of the odd-multiplicity square-free factors has no real root.
pub fn sturm_nonneg_on_reals(p: &Poly) -> bool {
    if p.is_zero() {
        return true;
    }
    if !p.lead().is_positive() {
        return false;
    }
    let odd = p
        .square_free_decomposition()
        .iter()
        .enumerate()
        .filter(|(i, _)| i % 2 == 0)
        .fold(Poly::one(), |acc, (_, f)| &acc * f);
    count_real_roots(&odd) == 0
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one() && k > 0;
            if !unit {
                write!(f, "{}", fmt_rat(&mag))?;
            }
            match k {
                0 => {}
                1 => write!(f, "ξ")?,
                _ => write!(f, "ξ^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Rat::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            c: self.c.iter().map(|a| -a.clone()).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: &Poly) -> Poly {
                (&self).$m(o)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
