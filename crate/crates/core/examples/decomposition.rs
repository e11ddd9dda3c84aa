//! Splitting a behavior into its controllable part and its autonomous part:
//! [P −Q] = F·[P̃ −Q̃] with an image representation (M, N) and Bezout rows.

use passlab::behavior::{decompose, image_representation};
use passlab::polymat::PolyMat;

fn main() {
    let p = PolyMat::from_ints(&[&[&[1, 2, 1]]]);
    let q = PolyMat::from_ints(&[&[&[0, 1, 1]]]);
    let d = decompose(&p, &q).unwrap();
    println!("P = {p}, Q = {q}");
    println!("F = {}  P̃ = {}  Q̃ = {}", d.f, d.ptil, d.qtil);
    println!("M = {}  N = {}", d.m, d.n);
    println!("X = {}  Y = {}  U = {}  V = {}", d.x, d.y, d.u, d.v);
    println!("identities hold exactly: {}", d.verify(&p, &q));

    // two ports, common factor diag(1, ξ+2)
    let p = PolyMat::from_ints(&[&[&[1, 1], &[]], &[&[], &[2, 1]]]);
    let q = PolyMat::from_ints(&[&[&[0, 1], &[]], &[&[], &[4, 4, 1]]]);
    let d = decompose(&p, &q).unwrap();
    let (m, n) = image_representation(&d).unwrap();
    println!("F = {}  image (M, N) = ({m}, {n})", d.f);
}
