//! Exact polynomial arithmetic: gcds, square-free parts, Hurwitz and Sturm
//! tests, and the para-conjugate p⋆(ξ) = p(−ξ).

use passlab::exactalg::{count_real_roots, sturm_nonneg_on_reals, Poly};

fn main() {
    let p = Poly::from_ints(&[1, 2, 1]); // (ξ+1)²
    let q = Poly::from_ints(&[0, 1, 1]); // ξ(ξ+1)
    println!("gcd({p}, {q}) = {}", Poly::gcd(&p, &q));

    let r = &p * &Poly::from_ints(&[-1, 1]);
    println!("square-free part of {r} = {}", r.square_free_part());
    println!("{r} star = {}", r.star());

    for h in [Poly::from_ints(&[2, 3, 1]), Poly::from_ints(&[1, 0, 1]), Poly::from_ints(&[-1, 1, 1])] {
        println!("{h}: Hurwitz {}", h.is_hurwitz());
    }

    // ω ↦ Re p(jω)·conj(q(jω)) must stay nonnegative for a positive-real q/p
    let (re, im) = p.axis_parts();
    println!("p(jω) = ({re}) + j({im})");
    let s = Poly::from_ints(&[1, 0, -3, 0, 1]);
    println!("{s}: {} real roots, nonnegative {}", count_real_roots(&s), sturm_nonneg_on_reals(&s));
}
