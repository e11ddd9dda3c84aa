//! Randomized self-consistency battery behind `passlab selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::behavior::decompose;
use crate::certificate::{certificate_pipeline, construct_certificate, CertifyOptions, CertifyOutcome};
use crate::error::Error;
use crate::exactalg::{rat, Poly, RatMatrix};
use crate::polymat::PolyMat;
use crate::statespace::StateSpace;

pub struct SelftestReport {
    pub seed: u64,
    pub cases: usize,
    pub passed: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl SelftestReport {
    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "cases": self.cases,
            "passed": self.passed,
            "skipped": self.skipped,
            "failures": self.failures,
        })
    }
}

fn poly(rng: &mut ChaCha8Rng, deg: usize) -> Poly {
    Poly::new((0..=deg).map(|_| rat(rng.gen_range(-3..=3))).collect())
}

/// P = F·P̃, Q = F·Q̃ with a random lower-triangular F.
pub fn random_pair(rng: &mut ChaCha8Rng, n: usize, deg: usize) -> (PolyMat, PolyMat) {
    let f = PolyMat::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => {
            let mut p = poly(rng, 1);
            if p.is_zero() {
                p = Poly::one();
            }
            p
        }
        std::cmp::Ordering::Greater => poly(rng, 1),
        std::cmp::Ordering::Less => Poly::zero(),
    });
    let p = PolyMat::from_fn(n, n, |_, _| poly(rng, deg));
    let q = PolyMat::from_fn(n, n, |_, _| poly(rng, deg));
    (&f * &p, &f * &q)
}

pub fn random_ss(rng: &mut ChaCha8Rng, d: usize, n: usize) -> StateSpace {
    let mut m = |r: usize, c: usize| RatMatrix::from_fn(r, c, |_, _| rat(rng.gen_range(-2..=2)));
    let a = m(d, d);
    let b = m(d, n);
    let c = m(n, d);
    let dd = m(n, n);
    StateSpace::new(a, b, c, dd).expect("consistent shapes")
}

pub fn run(seed: u64, cases: usize) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = SelftestReport {
        seed,
        cases,
        passed: 0,
        skipped: 0,
        failures: Vec::new(),
    };
    let opts = CertifyOptions::default();
    for k in 0..cases {
        if k % 2 == 0 {
            let n = rng.gen_range(1..=2);
            let (p, q) = random_pair(&mut rng, n, 2);
            match decompose(&p, &q) {
                Ok(dec) if dec.verify(&p, &q) => r.passed += 1,
                Ok(_) => r.failures.push(format!("case {k}: decomposition identities fail")),
                Err(Error::NormalrankDeficient { .. }) => r.skipped += 1,
                Err(e) => r.failures.push(format!("case {k}: decompose: {e}")),
            }
        } else {
            let d = rng.gen_range(1..=2);
            let ss = random_ss(&mut rng, d, 1);
            match construct_certificate(&ss, &opts) {
                Ok(CertifyOutcome::Certified(_)) => r.passed += 1,
                Ok(CertifyOutcome::NotPassive(_)) => {
                    if certificate_pipeline(&ss, &opts).is_ok() {
                        r.failures.push(format!("case {k}: certificate for a non-passive system"));
                    } else {
                        r.passed += 1;
                    }
                }
                Err(Error::Unsupported(_) | Error::Inconclusive(_) | Error::InconclusiveSplit(_)) => {
                    r.skipped += 1
                }
                Err(e) => r.failures.push(format!("case {k}: certify: {e}")),
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_is_clean_and_deterministic() {
        let a = run(7, 30);
        assert!(a.failures.is_empty(), "{:?}", a.failures);
        assert_eq!(a.to_json(), run(7, 30).to_json());
    }
}
