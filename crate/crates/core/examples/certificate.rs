//! Storage-function certificates: construction, verification, and the
//! dissipation inequality along a simulated trajectory.

use nalgebra::{DMatrix, DVector};
use passlab::certificate::{construct_certificate, verify_certificate, CertifyOptions, CertifyOutcome};
use passlab::statespace::{simulate, storage_check, Signal, StateSpace};

fn compact(m: &DMatrix<f64>) -> String {
    let rows: Vec<String> = m
        .row_iter()
        .map(|r| r.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(", "))
        .collect();
    format!("[{}]", rows.join("; "))
}

fn report(name: &str, ss: &StateSpace) {
    let opts = CertifyOptions::default();
    match construct_certificate(ss, &opts).unwrap() {
        CertifyOutcome::Certified(c) => {
            let cert = &c.certificate;
            println!("{name}: route {}, blocks {:?}", c.route.as_str(), c.blocks);
            println!("  X = {}  L = {}  W = {}", compact(&cert.x), compact(&cert.l), compact(&cert.w));
            println!("  max residual {:.1e}", cert.residuals.max());
            verify_certificate(ss, &cert.x, &cert.l, &cert.w, &opts.tol).unwrap();
            let x0 = DVector::from_element(ss.order(), 0.5);
            let u: Vec<Signal> = (0..ss.ports()).map(|k| Signal::sin(1.0 + k as f64).add(&Signal::exp(-1.0))).collect();
            let tr = simulate(ss, &x0, &u, 0.0, 5.0, 1e-3).unwrap();
            let sc = storage_check(&cert.x, &cert.l, &cert.w, &tr);
            println!("  ∫uᵀy − ½[xᵀXx] = {:.6} (≥ 0), identity residual {:.1e}", sc.dissipation_gap, sc.residual);
        }
        CertifyOutcome::NotPassive(v) => {
            println!("{name}: not passive (cond1 {}, cond2 {}, cond3 {})", v.cond1.as_str(), v.cond2.as_str(), v.cond3.as_str());
        }
    }
}

fn main() {
    report("RC", &StateSpace::from_ints(&[&[-1]], &[&[1]], &[&[1]], &[&[1]]).unwrap());
    report(
        "lossless",
        &StateSpace::from_ints(&[&[0, 1], &[-1, 0]], &[&[0], &[1]], &[&[0, 1]], &[&[0]]).unwrap(),
    );
    report(
        "uncontrollable stable mode",
        &StateSpace::from_ints(&[&[-1, 0], &[0, -2]], &[&[1], &[0]], &[&[1, 1]], &[&[1]]).unwrap(),
    );
    report(
        "coupled two-port",
        &StateSpace::from_ints(
            &[&[-1, 0], &[0, -2]],
            &[&[1, 0], &[1, 1]],
            &[&[1, 1], &[0, 1]],
            &[&[2, 0], &[0, 2]],
        )
        .unwrap(),
    );
    report(
        "hidden oscillator",
        &StateSpace::from_ints(&[&[0, 0, 1], &[0, 0, 1], &[0, -1, 0]], &[&[1], &[0], &[0]], &[&[1, 1, 0]], &[&[1]])
            .unwrap(),
    );
}
