//! State-space models and polynomial pairs describe the same behaviors;
//! this converts both ways and looks at controllability and observability.

use passlab::numkernel::Tolerance;
use passlab::statespace::{
    controllable, observable, realize_behavior, realize_statespace, stabilizable, staircase, transfer_mismatch,
    StateSpace,
};

fn main() {
    let ss = StateSpace::from_ints(
        &[&[0, 0, 1], &[0, 0, 1], &[0, -1, 0]],
        &[&[1], &[0], &[0]],
        &[&[1, 1, 0]],
        &[&[1]],
    )
    .unwrap();
    println!(
        "controllable {}, observable {}, stabilizable {}",
        controllable(&ss),
        observable(&ss),
        stabilizable(&ss, &Tolerance::default()).unwrap()
    );
    let r = realize_behavior(&ss).unwrap();
    println!("behavior: P̃ = {}  Q̃ = {}", r.ptil, r.qtil);
    println!("transfer mismatch {:.1e}", transfer_mismatch(&ss, &r.ptil, &r.qtil));

    let back = realize_statespace(&r.ptil, &r.qtil).unwrap();
    println!("observer form A = {}  B = {}  C = {}  D = {}", back.a, back.b, back.c, back.d);

    let hidden = StateSpace::from_ints(&[&[-1, 0], &[0, 1]], &[&[1], &[1]], &[&[1, 0]], &[&[1]]).unwrap();
    let st = staircase(&hidden);
    println!("staircase: observable block of size {} out of {}", st.d1, hidden.order());
}
