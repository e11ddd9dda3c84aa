#![allow(dead_code)]

use passlab::exactalg::{rat, Poly, RatMatrix};
use passlab::polymat::PolyMat;
use passlab::statespace::StateSpace;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ss(a: &[&[i64]], b: &[&[i64]], c: &[&[i64]], d: &[&[i64]]) -> StateSpace {
    StateSpace::from_ints(a, b, c, d).unwrap()
}

pub fn example23() -> StateSpace {
    ss(
        &[&[0, 0, 1], &[0, 0, 1], &[0, -1, 0]],
        &[&[1], &[0], &[0]],
        &[&[1, 1, 0]],
        &[&[1]],
    )
}

pub fn rc() -> StateSpace {
    ss(&[&[-1]], &[&[1]], &[&[1]], &[&[1]])
}

pub fn lossless2() -> StateSpace {
    ss(&[&[0, 1], &[-1, 0]], &[&[0], &[1]], &[&[0, 1]], &[&[0]])
}

pub fn scalar_pair(p: &[i64], q: &[i64]) -> (PolyMat, PolyMat) {
    (PolyMat::from_ints(&[&[p]]), PolyMat::from_ints(&[&[q]]))
}

pub fn transformer() -> (PolyMat, PolyMat) {
    (
        PolyMat::from_ints(&[&[&[], &[]], &[&[2], &[1]]]),
        PolyMat::from_ints(&[&[&[1], &[-2]], &[&[], &[]]]),
    )
}

pub fn random_poly(r: &mut ChaCha8Rng, deg: usize) -> Poly {
    Poly::new((0..=deg).map(|_| rat(r.gen_range(-3..=3))).collect())
}

/// P = F·P̃, Q = F·Q̃ with F lower triangular and nonsingular.
pub fn random_pair_with_factor(r: &mut ChaCha8Rng, n: usize, deg: usize) -> (PolyMat, PolyMat) {
    let f = PolyMat::from_fn(n, n, |i, j| {
        if i == j {
            let mut p = random_poly(r, 1);
            while p.is_zero() {
                p = random_poly(r, 1);
            }
            p
        } else if i > j {
            random_poly(r, 1)
        } else {
            Poly::zero()
        }
    });
    let dp = deg.saturating_sub(1);
    let p = PolyMat::from_fn(n, n, |_, _| random_poly(r, dp));
    let q = PolyMat::from_fn(n, n, |_, _| random_poly(r, dp));
    (&f * &p, &f * &q)
}

pub fn random_ss(r: &mut ChaCha8Rng, d: usize, n: usize) -> StateSpace {
    let mut m = |rows: usize, cols: usize| RatMatrix::from_fn(rows, cols, |_, _| rat(r.gen_range(-2..=2)));
    let a = m(d, d);
    let b = m(d, n);
    let c = m(n, d);
    let dd = m(n, n);
    StateSpace::new(a, b, c, dd).unwrap()
}

/// Hand-picked systems inside the supported factorization sub-cases:
/// single-port systems, decoupled two-port systems, and two-port systems
/// with D + Dᵀ ≻ 0.
pub fn corpus() -> Vec<(&'static str, StateSpace)> {
    vec![
        ("rc", rc()),
        ("integrator", ss(&[&[0]], &[&[1]], &[&[1]], &[&[0]])),
        ("integrator plus resistor", ss(&[&[0]], &[&[1]], &[&[1]], &[&[1]])),
        ("lossless oscillator", lossless2()),
        ("example 2.3", example23()),
        ("negative resistor", ss(&[&[-1]], &[&[1]], &[&[1]], &[&[-1]])),
        ("unstable pole", ss(&[&[1]], &[&[1]], &[&[1]], &[&[1]])),
        ("double pole", ss(&[&[-1, 1], &[0, -1]], &[&[0], &[1]], &[&[1, 0]], &[&[0]])),
        ("second order lowpass", ss(&[&[0, 1], &[-1, -1]], &[&[0], &[1]], &[&[1, 0]], &[&[0]])),
        ("second order bandpass", ss(&[&[0, 1], &[-1, -1]], &[&[0], &[1]], &[&[0, 1]], &[&[0]])),
        ("bandpass plus resistor", ss(&[&[0, 1], &[-2, -3]], &[&[0], &[1]], &[&[0, 1]], &[&[1]])),
        ("lead network", ss(&[&[-2]], &[&[1]], &[&[-1]], &[&[1]])),
        ("lag network", ss(&[&[-1]], &[&[1]], &[&[1]], &[&[2]])),
        ("non-minimum phase", ss(&[&[-1]], &[&[1]], &[&[-2]], &[&[1]])),
        ("uncontrollable stable mode", ss(&[&[-1, 0], &[0, -2]], &[&[1], &[0]], &[&[1, 1]], &[&[1]])),
        ("uncontrollable unstable mode", ss(&[&[-1, 0], &[0, 1]], &[&[1], &[0]], &[&[1, 1]], &[&[1]])),
        ("unobservable unstable mode", ss(&[&[-1, 0], &[0, 1]], &[&[1], &[1]], &[&[1, 0]], &[&[1]])),
        ("hidden oscillator", ss(&[&[-1, 0, 0], &[0, 0, 1], &[0, -1, 0]], &[&[1], &[0], &[0]], &[&[1, 1, 0]], &[&[1]])),
        ("lossless plus damping", ss(&[&[0, 1, 0], &[-1, 0, 0], &[0, 0, -1]], &[&[0], &[1], &[1]], &[&[0, 1, 1]], &[&[0]])),
        ("series rlc", ss(&[&[-1, -1], &[1, 0]], &[&[1], &[0]], &[&[1, 0]], &[&[0]])),
        ("parallel rc", ss(&[&[-3]], &[&[2]], &[&[2]], &[&[0]])),
        ("sign flipped capacitor", ss(&[&[0]], &[&[1]], &[&[-1]], &[&[0]])),
        ("static gain", ss(&[], &[], &[], &[&[3]])),
        ("zero system", ss(&[], &[], &[], &[&[0]])),
        ("negative static gain", ss(&[], &[], &[], &[&[-1]])),
        ("two resistors", ss(&[], &[], &[], &[&[1, 0], &[0, 2]])),
        ("gyrator plus resistors", ss(&[], &[], &[], &[&[1, 1], &[-1, 1]])),
        ("decoupled rc and capacitor", ss(&[&[-1, 0], &[0, 0]], &[&[1, 0], &[0, 1]], &[&[1, 0], &[0, 1]], &[&[1, 0], &[0, 0]])),
        ("coupled two-port", ss(&[&[-1, 0], &[0, -2]], &[&[1, 0], &[1, 1]], &[&[1, 1], &[0, 1]], &[&[2, 0], &[0, 2]])),
        ("non-passive two-port", ss(&[&[-1, 0], &[0, -1]], &[&[1, 0], &[0, 1]], &[&[-5, 0], &[0, 1]], &[&[1, 0], &[0, 1]])),
    ]
}
