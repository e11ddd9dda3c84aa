//! JSON input and output. Inputs share one schema:
//!
//! ```text
//! {"kind":"pair","P":[[["1","1"]]],"Q":[[["0","1"]]]}
//! {"kind":"ss","A":[["-1"]],"B":[["1"]],"C":[["1"]],"D":[["1"]]}
//! ```
//!
//! Polynomial entries are coefficient arrays, lowest degree first. Scalars
//! may be strings ("3/4", "-0.5") or JSON numbers.

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exactalg::{fmt_rat, parse_rat, Poly, Rat, RatMatrix};
use crate::numkernel::{FPoly, FPolyMat};
use crate::polymat::PolyMat;
use crate::statespace::StateSpace;

#[derive(Clone, Debug)]
pub enum Input {
    Pair { p: PolyMat, q: PolyMat },
    Ss(StateSpace),
}

fn at(path: &str, msg: impl Into<String>) -> Error {
    Error::parse(path.to_string(), msg)
}

pub fn parse_json(text: &str, file: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| at(&format!("{file}:{}:{}", e.line(), e.column()), e.to_string()))
}

fn scalar(v: &Value, path: &str) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s).map_err(|_| at(path, format!("{s:?} is not a rational"))),
        Value::Number(n) => parse_rat(&n.to_string()).map_err(|_| at(path, "bad number")),
        _ => Err(at(path, "expected a number or rational string")),
    }
}

fn float(v: &Value, path: &str) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| at(path, "bad number")),
        Value::String(s) => s
            .trim()
            .parse::<f64>()
            .or_else(|_| parse_rat(s).map(|r| crate::exactalg::to_f64(&r)))
            .map_err(|_| at(path, format!("{s:?} is not a number"))),
        _ => Err(at(path, "expected a number")),
    }
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| at(path, "expected an array"))
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| at(key, "missing field"))
}

fn rows_of<'a>(v: &'a Value, path: &str) -> Result<Vec<&'a Vec<Value>>> {
    let rows = array(v, path)?;
    let out: Vec<&Vec<Value>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| array(r, &format!("{path}[{i}]")))
        .collect::<Result<_>>()?;
    if out.windows(2).any(|w| w[0].len() != w[1].len()) {
        return Err(at(path, "rows have different lengths"));
    }
    Ok(out)
}

/// Rational matrix; the shape comes from the data.
pub fn rat_matrix(v: &Value, path: &str) -> Result<RatMatrix> {
    let rows = rows_of(v, path)?;
    let cols = rows.first().map_or(0, |r| r.len());
    let mut m = RatMatrix::zeros(rows.len(), cols);
    for (i, r) in rows.iter().enumerate() {
        for (j, e) in r.iter().enumerate() {
            m[(i, j)] = scalar(e, &format!("{path}[{i}][{j}]"))?;
        }
    }
    Ok(m)
}

pub fn float_matrix(v: &Value, path: &str) -> Result<DMatrix<f64>> {
    let rows = rows_of(v, path)?;
    let cols = rows.first().map_or(0, |r| r.len());
    let mut m = DMatrix::zeros(rows.len(), cols);
    for (i, r) in rows.iter().enumerate() {
        for (j, e) in r.iter().enumerate() {
            m[(i, j)] = float(e, &format!("{path}[{i}][{j}]"))?;
        }
    }
    Ok(m)
}

pub fn poly_matrix(v: &Value, path: &str) -> Result<PolyMat> {
    let rows = rows_of(v, path)?;
    let entries: Vec<Vec<Poly>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, e)| {
                    let p = format!("{path}[{i}][{j}]");
                    match e {
                        Value::Array(cs) => Ok(Poly::new(
                            cs.iter()
                                .enumerate()
                                .map(|(k, c)| scalar(c, &format!("{p}[{k}]")))
                                .collect::<Result<_>>()?,
                        )),
                        other => Ok(Poly::constant(scalar(other, &p)?)),
                    }
                })
                .collect::<Result<Vec<Poly>>>()
        })
        .collect::<Result<_>>()?;
    PolyMat::from_rows(entries)
}

fn state_space(v: &Value) -> Result<StateSpace> {
    let a = rat_matrix(field(v, "A")?, "A")?;
    let d = rat_matrix(field(v, "D")?, "D")?;
    let nx = a.nrows();
    let n = d.nrows();
    let fill = |m: RatMatrix, r: usize, c: usize| {
        if m.nrows() == 0 || m.ncols() == 0 {
            RatMatrix::zeros(r, c)
        } else {
            m
        }
    };
    let a = fill(a, nx, nx);
    let b = fill(rat_matrix(field(v, "B")?, "B")?, nx, n);
    let c = fill(rat_matrix(field(v, "C")?, "C")?, n, nx);
    StateSpace::new(a, b, c, d)
}

pub fn parse_input(v: &Value) -> Result<Input> {
    let kind = field(v, "kind")?
        .as_str()
        .ok_or_else(|| at("kind", "expected a string"))?;
    match kind {
        "pair" => {
            let p = poly_matrix(field(v, "P")?, "P")?;
            let q = poly_matrix(field(v, "Q")?, "Q")?;
            if p.rows() != q.rows() || p.cols() != q.cols() || p.rows() != p.cols() {
                return Err(Error::Dimension(format!(
                    "P is {}x{}, Q is {}x{}; need equal square sizes",
                    p.rows(),
                    p.cols(),
                    q.rows(),
                    q.cols()
                )));
            }
            Ok(Input::Pair { p, q })
        }
        "ss" => Ok(Input::Ss(state_space(v)?)),
        other => Err(at("kind", format!("unknown kind {other:?}"))),
    }
}

/// Rounds to 12 significant digits so printed values are reproducible.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(x.to_string());
    }
    let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let r = if r == 0.0 { 0.0 } else { r };
    json!(r)
}

pub fn rat_json(r: &Rat) -> Value {
    Value::String(fmt_rat(r))
}

pub fn rat_matrix_json(m: &RatMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| rat_json(&m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn poly_json(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(rat_json).collect())
}

pub fn poly_matrix_json(m: &PolyMat) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| poly_json(m.get(i, j))).collect()))
            .collect(),
    )
}

pub fn matrix_json(m: &DMatrix<f64>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| num(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn complex_json(z: Complex64) -> Value {
    json!({"re": num(z.re), "im": num(z.im)})
}

pub fn cvector_json(v: &DVector<Complex64>) -> Value {
    Value::Array(v.iter().map(|z| complex_json(*z)).collect())
}

pub fn fpoly_json(p: &FPoly) -> Value {
    Value::Array(p.0.iter().map(|c| num(*c)).collect())
}

pub fn fpoly_matrix_json(m: &FPolyMat) -> Value {
    Value::Array(
        (0..m.rows)
            .map(|i| Value::Array((0..m.cols).map(|j| fpoly_json(m.get(i, j))).collect()))
            .collect(),
    )
}

pub fn pair_json(p: &PolyMat, q: &PolyMat) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("kind".into(), json!("pair"));
    m.insert("P".into(), poly_matrix_json(p));
    m.insert("Q".into(), poly_matrix_json(q));
    m
}

pub fn ss_json(ss: &StateSpace) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("kind".into(), json!("ss"));
    m.insert("A".into(), rat_matrix_json(&ss.a));
    m.insert("B".into(), rat_matrix_json(&ss.b));
    m.insert("C".into(), rat_matrix_json(&ss.c));
    m.insert("D".into(), rat_matrix_json(&ss.d));
    m
}

/// `key: value` lines, nested keys joined by dots.
pub fn to_text(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&p, x, out);
                }
            }
            Value::Array(a) if a.iter().any(|x| x.is_object()) => {
                for (i, x) in a.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), x, out);
                }
            }
            Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
            other => out.push_str(&format!("{prefix}: {other}\n")),
        }
    }
    let mut out = String::new();
    walk("", v, &mut out);
    out
}
