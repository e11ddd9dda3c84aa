//! Simulating the uncontrollable system whose transfer function 1 + 1/ξ is
//! positive real, yet whose hidden oscillator supplies unbounded energy.

use nalgebra::DVector;
use passlab::statespace::{simulate, Signal, StateSpace};
use std::f64::consts::PI;

fn main() {
    let ss = StateSpace::from_ints(
        &[&[0, 0, 1], &[0, 0, 1], &[0, -1, 0]],
        &[&[1], &[0], &[0]],
        &[&[1, 1, 0]],
        &[&[1]],
    )
    .unwrap();
    let u = [Signal::sin(1.0)];

    // from rest the supplied energy ∫uy = ∫u² + ½(∫u)² never goes negative
    let rest = simulate(&ss, &DVector::zeros(3), &u, 0.0, 10.0, 1e-3).unwrap();
    let lowest = rest.energy.iter().copied().fold(f64::INFINITY, f64::min);
    println!("from rest: min ∫uy = {lowest:.3e}");

    // with the oscillator excited, y = 1 − sin t − cos t and −∫uy grows like nπ/2
    let x0 = DVector::from_vec(vec![0.0, 0.0, -1.0]);
    for n in 1..=6 {
        let t1 = n as f64 * PI;
        let tr = simulate(&ss, &x0, &u, 0.0, t1, 1e-3).unwrap();
        let exact = n as f64 * PI / 2.0 + t1.cos() - 1.0;
        println!("n = {n}: extracted {:.9}  exact {exact:.9}", -tr.final_energy());
    }
}
