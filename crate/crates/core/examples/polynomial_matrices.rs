//! Polynomial matrices: determinants, echelon forms, syzygies, unimodularity
//! and the full-rank test over the closed right half-plane.

use passlab::numkernel::Tolerance;
use passlab::polymat::{
    det, echelon, fullrank_everywhere, is_unimodular, normalrank, syzygy_basis, EchelonForm, PolyMat, Region,
};

fn main() {
    let r = PolyMat::from_ints(&[&[&[1, 2, 1], &[0, 1, 1]]]);
    let e = echelon(&r, EchelonForm::LowerColumn);
    println!("R = {r}");
    println!("R·U = [E 0] with E = {} (rank {})", e.e, e.rank);

    let u = PolyMat::from_ints(&[&[&[1], &[0, 1]], &[&[], &[1]]]);
    println!("det {} unimodular {}", det(&u), is_unimodular(&u));

    let phi = PolyMat::from_ints(&[&[&[1], &[1]], &[&[1], &[1]]]);
    println!("normalrank of {phi} = {}", normalrank(&phi));
    println!("left syzygies {}", syzygy_basis(&phi).v);

    let t = Tolerance::default();
    let w = PolyMat::from_ints(&[&[&[1, 0, 1], &[0, 1, 0, 1]]]);
    let fr = fullrank_everywhere(&w, Region::ClosedRhp, &t).unwrap();
    println!("[ξ²+1  ξ³+ξ] full rank on the closed RHP: {} (witness {:?})", fr.full_rank, fr.witness);
}
