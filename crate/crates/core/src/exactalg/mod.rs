//! Exact rational arithmetic, univariate polynomials, real-root sign
//! analysis and two-variable polynomials.

pub mod poly;
pub mod rat;
pub mod ratmat;
pub mod twovar;

pub use poly::{count_real_roots, sturm_nonneg_on_reals, sturm_sequence, Poly};
pub use rat::{fmt_rat, frac, parse_rat, rat, to_f64, Rat};
pub use ratmat::RatMatrix;
pub use twovar::{bdf_numerator, bdf_phi, bdf_phi_scalar, TwoVarMat, TwoVarPoly};

/// p(ξ) ↦ p(−ξ).
pub fn poly_star(p: &Poly) -> Poly {
    p.star()
}
