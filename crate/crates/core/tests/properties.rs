//! Property tests over random pairs and systems.

mod common;

use nalgebra::DVector;
use proptest::prelude::*;

use passlab::behavior::{decompose, passive_partition};
use passlab::certificate::{certificate_pipeline, verify_certificate, CertifyOptions};
use passlab::exactalg::{bdf_numerator, bdf_phi, bdf_phi_scalar, rat, Poly, RatMatrix};
use passlab::numkernel::{eigenvalues, Tolerance};
use passlab::polymat::{normalrank, PolyMat};
use passlab::prpair::{check_condition1, check_pair, check_pair_with, CheckOptions, Status};
use passlab::statespace::{
    observable, realize_behavior, realize_statespace, simulate, transfer_mismatch, Signal, StateSpace,
};

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-3i64..=3, 1..=max_deg + 1).prop_map(|c| Poly::from_ints(&c))
}

fn polymat(n: usize, max_deg: usize) -> impl Strategy<Value = PolyMat> {
    prop::collection::vec(poly(max_deg), n * n).prop_map(move |e| {
        let mut it = e.into_iter();
        PolyMat::from_fn(n, n, |_, _| it.next().expect("n² entries"))
    })
}

fn pair(max_n: usize, max_deg: usize) -> impl Strategy<Value = (PolyMat, PolyMat)> {
    (1..=max_n).prop_flat_map(move |n| (polymat(n, max_deg), polymat(n, max_deg)))
}

fn factored_pair() -> impl Strategy<Value = (PolyMat, PolyMat)> {
    (1..=2usize).prop_flat_map(|n| (polymat(n, 1), polymat(n, 2), polymat(n, 2))).prop_map(|(f, p, q)| {
        let n = f.rows();
        let mut f = f;
        for i in 0..n {
            for j in i + 1..n {
                f.set(i, j, Poly::zero());
            }
            if f.get(i, i).is_zero() {
                f.set(i, i, Poly::one());
            }
        }
        (&f * &p, &f * &q)
    })
}

fn system(max_d: usize) -> impl Strategy<Value = StateSpace> {
    (1..=max_d).prop_flat_map(|d| {
        (
            prop::collection::vec(-2i64..=2, d * d),
            prop::collection::vec(-2i64..=2, d),
            prop::collection::vec(-2i64..=2, d),
            -2i64..=2,
        )
            .prop_map(move |(a, b, c, dd)| {
                let m = |v: &[i64], r: usize, cols: usize| RatMatrix::from_fn(r, cols, |i, j| rat(v[i * cols + j]));
                StateSpace::new(m(&a, d, d), m(&b, d, 1), m(&c, 1, d), RatMatrix::from_ints(&[&[dd]])).unwrap()
            })
    })
}

/// Scalar positive-real pairs (ξ + a, ξ + b), a, b > 0, optionally stacked
/// into a diagonal two-port.
fn pr_pair() -> impl Strategy<Value = (PolyMat, PolyMat)> {
    (prop::collection::vec((1i64..=4, 1i64..=4), 1..=2)).prop_map(|ab| {
        let n = ab.len();
        let p = PolyMat::from_fn(n, n, |i, j| if i == j { Poly::from_ints(&[ab[i].0, 1]) } else { Poly::zero() });
        let q = PolyMat::from_fn(n, n, |i, j| if i == j { Poly::from_ints(&[ab[i].1, 1]) } else { Poly::zero() });
        (p, q)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn decomposition_identities_hold_exactly((p, q) in factored_pair()) {
        match decompose(&p, &q) {
            Ok(d) => prop_assert!(d.verify(&p, &q)),
            Err(passlab::Error::NormalrankDeficient { .. }) => {
                prop_assert!(normalrank(&p.hstack(&q)) < p.rows())
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn cross_check_agrees((p, q) in pair(2, 2)) {
        let opts = CheckOptions { tol: Tolerance::default(), cross_check: true };
        if let Ok(v) = check_pair_with(&p, &q, &opts) {
            if let Some(c) = v.cross_check {
                prop_assert!(!c.applicable || c.agrees, "{:?} vs {:?}", v.cond3, c.direct);
            }
        }
    }

    #[test]
    fn condition1_is_symmetric_in_p_and_q((p, q) in pair(2, 2)) {
        let t = Tolerance::default();
        let a = check_condition1(&p, &q, &t).map(|c| c.0);
        let b = check_condition1(&q, &p, &t).map(|c| c.0);
        prop_assert_eq!(a.ok(), b.ok());
    }

    #[test]
    fn verdict_invariant_under_left_unimodular_and_scaling((p, q) in pair(2, 2), k in 1i64..=5, c in -3i64..=3) {
        let n = p.rows();
        let u = PolyMat::from_fn(n, n, |i, j| {
            if i == j { Poly::from_ints(&[k]) } else if j == i + 1 { Poly::from_ints(&[c, 1]) } else { Poly::zero() }
        });
        let a = check_pair(&p, &q).map(|v| v.overall);
        let b = check_pair(&(&u * &p), &(&u * &q)).map(|v| v.overall);
        prop_assert_eq!(a.ok(), b.ok());
    }

    #[test]
    fn realization_round_trip(ss in system(3)) {
        let r = realize_behavior(&ss).unwrap();
        prop_assert!(transfer_mismatch(&ss, &r.ptil, &r.qtil) <= 1e-8);
        let back = realize_statespace(&r.ptil, &r.qtil).unwrap();
        prop_assert!(transfer_mismatch(&back, &r.ptil, &r.qtil) <= 1e-8);
        let again = realize_behavior(&back).unwrap();
        prop_assert!(passlab::polymat::unimodularly_equivalent(
            &r.ptil.hstack(&-&r.qtil),
            &again.ptil.hstack(&-&again.qtil)
        ).unwrap());
    }

    #[test]
    fn partition_invariants((p, q) in pr_pair()) {
        let part = passive_partition(&p, &q, &CheckOptions::default()).unwrap();
        prop_assert!(part.verify(&p, &q));
        prop_assert!(check_pair(&part.ptil_io, &part.qtil_io).unwrap().passes());
    }

    #[test]
    fn certificates_match_verdicts_and_verify(ss in system(2)) {
        let opts = CertifyOptions::default();
        let r = realize_behavior(&ss).unwrap();
        let verdict = check_pair(&r.ptil, &r.qtil).unwrap().overall;
        match certificate_pipeline(&ss, &opts) {
            Ok(c) => {
                prop_assert_eq!(verdict, Status::Pass);
                let cert = &c.certificate;
                prop_assert!(verify_certificate(&ss, &cert.x, &cert.l, &cert.w, &opts.tol).is_ok());
                if observable(&ss) {
                    prop_assert!(cert.psd_margin > 0.0);
                    prop_assert!(eigenvalues(&ss.af()).iter().all(|z| z.re <= 1e-6));
                }
            }
            Err(passlab::Error::Unsupported(_)) => {}
            Err(_) => prop_assert_ne!(verdict, Status::Pass),
        }
    }
}

proptest! {
    #[test]
    fn bilinear_difference_quotient_is_exact(c in prop::collection::vec(-5i64..=5, 1..6)) {
        let p = Poly::from_ints(&c);
        prop_assert_eq!(bdf_phi_scalar(&p).mul_xi_plus_eta(), bdf_numerator(&p));
        let m = bdf_phi(&PolyMat::scalar(p.clone()));
        prop_assert_eq!(m.get(0, 0), &bdf_phi_scalar(&p));
    }

    #[test]
    fn bilinear_form_derivative_identity(
        c in prop::collection::vec(-3i64..=3, 2..5),
        w1 in 0.2f64..3.0,
        w2 in 0.2f64..3.0,
        t in 0.0f64..4.0,
    ) {
        // d/dt L_Φ(a, b) = (r(d/dt)a)·b − a·(r(−d/dt)b) with Φ = (r(ξ) − r(−η))/(ξ + η)
        let p = Poly::from_ints(&c);
        let phi = bdf_phi_scalar(&p);
        let a = Signal::sin(w1).add(&Signal::exp(-0.5));
        let b = Signal::cos(w2).scale(2.0);
        let k = c.len() + 1;
        let da = a.derivs(t, k);
        let db = b.derivs(t, k);
        let da1: Vec<f64> = da[1..].to_vec();
        let db1: Vec<f64> = db[1..].to_vec();
        let lhs = phi.bilinear(&da1, &db[..k - 1]) + phi.bilinear(&da[..k - 1], &db1);
        let rc: Vec<f64> = p.to_f64_coeffs();
        let ra: f64 = rc.iter().enumerate().map(|(i, r)| r * da[i]).sum();
        let rb: f64 = rc.iter().enumerate().map(|(i, r)| r * if i % 2 == 0 { db[i] } else { -db[i] }).sum();
        let rhs = ra * db[0] - da[0] * rb;
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn zero_state_energy_of_example23_is_nonnegative(w in 0.1f64..3.0, a in -2.0f64..2.0, t1 in 0.5f64..8.0) {
        let u = vec![Signal::sin(w).scale(a).add(&Signal::constant(0.3))];
        let tr = simulate(&common::example23(), &DVector::zeros(3), &u, 0.0, t1, 1e-2).unwrap();
        prop_assert!(tr.energy.iter().all(|e| *e >= -1e-8));
    }
}
