//! Input-output partitions of passive behaviors: an orthogonal selection of
//! port variables turns (P, Q) into a pair with proper transfer function.

use passlab::behavior::{behavior_is_passive, passive_partition};
use passlab::polymat::PolyMat;
use passlab::prpair::{check_pair, CheckOptions};

fn main() {
    let opts = CheckOptions::default();
    // ideal transformer: v1 = 2 v2 and i2 = -2 i1
    let p = PolyMat::from_ints(&[&[&[], &[]], &[&[2], &[1]]]);
    let q = PolyMat::from_ints(&[&[&[1], &[-2]], &[&[], &[]]]);
    let part = passive_partition(&p, &q, &opts).unwrap();
    println!("selection {:?}  T1 = {}  T2 = {}", part.selection, part.t1, part.t2);
    println!("P̃io = {}  Q̃io = {}  Δ = {}", part.ptil_io, part.qtil_io, part.degree);
    println!("invariants exact: {}", part.verify(&p, &q));
    println!("partitioned pair passes: {}", check_pair(&part.ptil_io, &part.qtil_io).unwrap().passes());

    // an ideal capacitor needs the current as the input
    let p = PolyMat::from_ints(&[&[&[1]]]);
    let q = PolyMat::from_ints(&[&[&[0, 1]]]);
    let (v, part) = behavior_is_passive(&p, &q, &opts).unwrap();
    println!("capacitor: {} with selection {:?}", v.overall.as_str(), part.map(|x| x.selection));
}
