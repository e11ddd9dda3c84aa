//! The three positive-real pair conditions on a handful of pairs, with the
//! witness reported for each failure.

use passlab::polymat::PolyMat;
use passlab::prpair::{check_pair_with, CheckOptions, PRPairVerdict};

fn show(name: &str, v: &PRPairVerdict) {
    println!(
        "{name:28} cond1 {:12} cond2 {:12} cond3 {:12} overall {}",
        v.cond1.as_str(),
        v.cond2.as_str(),
        v.cond3.as_str(),
        v.overall.as_str()
    );
    if let Some(w) = &v.witness1 {
        println!("{:28} negative direction at λ = {:.4} ({:?}), value {:.3e}", "", w.lambda, w.stage, w.value);
    }
    if let Some(w) = &v.witness2 {
        println!("{:28} rank drop at λ = {:.4}: {}", "", w.lambda, w.explanation);
    }
    if let Some(w) = &v.witness3 {
        println!("{:28} lossless trajectory at λ = {:.4}, residual {:.1e}", "", w.lambda, w.residual);
    }
}

fn main() {
    let opts = CheckOptions {
        cross_check: true,
        ..CheckOptions::default()
    };
    let scalar = |p: &[i64], q: &[i64]| (PolyMat::from_ints(&[&[p]]), PolyMat::from_ints(&[&[q]]));
    let cases = [
        ("capacitor in series (ξ+1, ξ)", scalar(&[1, 1], &[0, 1])),
        ("hidden lossless (ξ+1, ξ²+ξ)", scalar(&[1, 1], &[0, 1, 1])),
        ("negative capacitor (1, -ξ)", scalar(&[1], &[0, -1])),
        ("uncontrollable oscillator", scalar(&[1, 0, 1], &[1, 1, 1, 1])),
        (
            "indefinite 2x2",
            (
                PolyMat::from_ints(&[&[&[], &[1, 1]], &[&[], &[]]]),
                PolyMat::from_ints(&[&[&[], &[]], &[&[], &[2, 1]]]),
            ),
        ),
    ];
    for (name, (p, q)) in &cases {
        show(name, &check_pair_with(p, q, &opts).unwrap());
    }
}
