//! Spectral factors Z⋆Z = H of para-Hermitian matrices, polynomial and
//! rational.

use num::complex::Complex64;
use passlab::certificate::{are_solve, spectral_factor_poly, spectral_factor_ss, AXIS_SAMPLES};
use passlab::numkernel::Tolerance;
use passlab::polymat::PolyMat;
use passlab::statespace::StateSpace;

fn main() {
    let tol = Tolerance::default();

    // 4 − 2ξ² = (2 − √2ξ)(2 + √2ξ)
    let h = PolyMat::from_ints(&[&[&[4, 0, -2]]]);
    let sf = spectral_factor_poly(&h, &tol).unwrap();
    println!("H = {h}: residual {:.1e}, analytic {}", sf.residual, sf.analytic);
    println!("  Z(1) = {:.6}", sf.eval(Complex64::new(1.0, 0.0)).unwrap()[(0, 0)]);

    // diagonal H is factored entry by entry: 1 − ξ² = (1 − ξ)(1 + ξ)
    let h = PolyMat::from_ints(&[&[&[1, 0, -1], &[]], &[&[], &[9]]]);
    let sf = spectral_factor_poly(&h, &tol).unwrap();
    println!("H = {h}: rank {}, residual {:.1e}", sf.rank, sf.residual);

    // G + G⋆ for G = (ξ + 2)/(ξ + 1) through the Riccati equation
    let ss = StateSpace::from_ints(&[&[-1]], &[&[1]], &[&[1]], &[&[1]]).unwrap();
    let (sf, are) = spectral_factor_ss(&ss, &tol).unwrap();
    println!("RC: X = {:.9}, closed loop {:?}, stabilizing {}", are.x[(0, 0)], are.closed_loop, are.stabilizing);
    for &w in AXIS_SAMPLES.iter().take(3) {
        let s = Complex64::new(0.0, w);
        println!("  Z({s:.1}) = {:.6}", sf.eval(s).unwrap()[(0, 0)]);
    }
    let direct = are_solve(&ss.af(), &ss.bf(), &ss.cf(), &ss.df(), &tol).unwrap();
    println!("  residual of the Riccati equation {:.1e}", direct.residual);
}
