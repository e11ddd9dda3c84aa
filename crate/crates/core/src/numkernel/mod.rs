//! Small dense numerics: polynomial roots, Lyapunov solves, Hermitian PSD
//! tests, Schur form and the stable/unstable split, plus the tolerance
//! policy for deciding what sits on the imaginary axis.

mod fpoly;
mod linalg;
mod roots;
mod tolerance;

pub use fpoly::{FPoly, FPolyMat};
pub use linalg::{
    complex_lstsq, complex_nullspace, eigenvalues, hermitian_psd, lossless_lyap_solve, lstsq, lyapunov_solve, nullspace,
    numeric_rank, range_basis, real_schur, smallest_singular, stable_unstable_split, sym, PsdCheck,
    Split,
};
pub use roots::{roots, simple_roots, Root, RootSet};
pub use tolerance::{RegionTag, Tolerance};
