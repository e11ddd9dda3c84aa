//! End-to-end runs of the command line through `run_args`.

use passlab::cli::{run_args, Report};
use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/examples/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Report {
    let mut v = vec!["passlab"];
    v.extend_from_slice(args);
    run_args(v)
}

fn json(r: &Report) -> Value {
    serde_json::from_str(&r.stdout).unwrap()
}

fn tmp(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("passlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn check_pair_example23_fails_at_j() {
    let r = run(&["check-pair", &data("example23.json")]);
    assert_eq!(r.code, 1);
    let v = json(&r);
    assert_eq!(v["cond2"], "fail");
    let w = &v["witnesses"][0];
    assert_eq!(w["condition"], 2);
    assert!((w["lambda"]["im"].as_f64().unwrap().abs() - 1.0).abs() < 1e-6);
}

#[test]
fn check_pair_exit_codes() {
    assert_eq!(run(&["check-pair", "--input", &data("controllable_part_pair.json")]).code, 0);
    let r = run(&["check-pair", &data("hidden_lossless_pair.json"), "--witness"]);
    assert_eq!(r.code, 1);
    assert!(json(&r)["witnesses"][0]["p"].is_array());
    let r = run(&["check-pair", &data("indefinite_pair.json")]);
    assert_eq!(json(&r)["witnesses"][0]["stage"], "axis");
}

#[test]
fn certify_rc_and_verify_round_trip() {
    let r = run(&["certify", &data("rc.json")]);
    assert_eq!(r.code, 0);
    let v = json(&r);
    assert!((v["X"][0][0].as_f64().unwrap() - 0.171573).abs() < 1e-6);
    let cert = tmp("rc_cert.json", &r.stdout);
    let r = run(&["verify-cert", "--ss", &data("rc.json"), "--cert", &cert]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let bad = tmp("bad_cert.json", r#"{"X":[[1]],"L":[[0.5858]],"W":[[1.4142]]}"#);
    let r = run(&["verify-cert", &data("rc.json"), "--cert", &bad]);
    assert_eq!(r.code, 1);
    assert_eq!(json(&r)["valid"], false);
}

#[test]
fn certify_example23_is_negative() {
    let r = run(&["certify", "--ss", &data("example23.json")]);
    assert_eq!(r.code, 1);
    assert_eq!(json(&r)["verdict"], "not-passive");
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["certify", "lossless.json"],
        vec!["decompose", "hidden_lossless_pair.json"],
        vec!["partition", "transformer_pair.json"],
    ] {
        let a: Vec<String> = args.iter().enumerate().map(|(i, s)| if i == 1 { data(s) } else { s.to_string() }).collect();
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        let r1 = run(&a);
        let r2 = run(&a);
        assert_eq!(r1, r2);
        assert_eq!(r1.code, 0, "{:?}: {}", a, r1.stdout);
    }
}

#[test]
fn realize_round_trip_through_files() {
    let r = run(&["realize", "--from", "ss", &data("rc.json")]);
    assert_eq!(r.code, 0);
    let pair = tmp("rc_pair.json", &r.stdout);
    let r = run(&["realize", "--from", "pair", &pair]);
    assert_eq!(r.code, 0);
    let ss = tmp("rc_again.json", &r.stdout);
    let r = run(&["certify", &ss]);
    assert_eq!(r.code, 0);
    assert_eq!(run(&["realize", "--from", "pair", &data("rc.json")]).code, 2);
}

#[test]
fn simulate_csv() {
    let r = run(&[
        "simulate", &data("example23.json"), "--input", "sin(t)", "--x0", "0,0,-1", "--t1", "6.283185307179586",
    ]);
    assert_eq!(r.code, 0);
    let mut lines = r.stdout.lines();
    assert_eq!(lines.next().unwrap(), "t,u1,y1,x1,x2,x3,energy");
    let last = r.stdout.lines().last().unwrap();
    let energy: f64 = last.rsplit(',').next().unwrap().parse().unwrap();
    assert!((energy + std::f64::consts::PI).abs() < 1e-6);
}

#[test]
fn input_errors_exit_2_with_location() {
    let r = run(&["simulate", &data("rc.json"), "--input", "sin(t", "--t1", "1"]);
    assert_eq!(r.code, 2);
    assert!(json(&r)["location"].as_str().unwrap().contains("column"));
    let r = run(&["simulate", &data("rc.json"), "--input", "foo(t)", "--t1", "1"]);
    assert_eq!(r.code, 2);
    let bad = tmp("bad.json", r#"{"kind":"ss","A":[["1","x"]],"B":[],"C":[],"D":[["1"]]}"#);
    let r = run(&["certify", &bad]);
    assert_eq!(r.code, 2);
    assert_eq!(json(&r)["location"], "A[0][1]");
    let bad = tmp("dims.json", r#"{"kind":"pair","P":[[["1"]]],"Q":[[["1"],["1"]]]}"#);
    assert_eq!(run(&["check-pair", &bad]).code, 2);
    let bad = tmp("syntax.json", "{\"kind\":");
    assert_eq!(run(&["check-pair", &bad]).code, 2);
    assert_eq!(run(&["nonsense"]).code, 2);
}

#[test]
fn specfact_forms() {
    let r = run(&["specfact", "--poly", &data("spectral_h.json")]);
    assert_eq!(r.code, 0);
    let v = json(&r);
    let k = &v["K"][0][0];
    assert!((k[0].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert!((k[1].as_f64().unwrap() - std::f64::consts::SQRT_2).abs() < 1e-9);
    let r = run(&["specfact", "--ss", &data("rc.json")]);
    assert_eq!(r.code, 0);
    assert!((json(&r)["W"][0][0].as_f64().unwrap() - std::f64::consts::SQRT_2).abs() < 1e-9);
}

#[test]
fn text_format_and_selftest() {
    let r = run(&["check-pair", &data("example23.json"), "--format", "text"]);
    assert!(r.stdout.contains("overall: fail"));
    let r = run(&["selftest", "--cases", "10"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
}
