//! Input signals built from c·tᵏ·e^{at}·{1, cos bt, sin bt} terms. The set is
//! closed under sums, products and differentiation, all done exactly.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Trig {
    One,
    Cos,
    Sin,
}

/// c·tᵏ·e^{a t}·trig(b t)
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub c: f64,
    pub k: u32,
    pub a: f64,
    pub b: f64,
    pub trig: Trig,
}

impl Term {
    pub fn eval(&self, t: f64) -> f64 {
        let base = self.c * t.powi(self.k as i32) * (self.a * t).exp();
        match self.trig {
            Trig::One => base,
            Trig::Cos => base * (self.b * t).cos(),
            Trig::Sin => base * (self.b * t).sin(),
        }
    }

    fn normalised(mut self) -> Term {
        if self.trig == Trig::One {
            self.b = 0.0;
        } else if self.b == 0.0 {
            if self.trig == Trig::Sin {
                self.c = 0.0;
            }
            self.trig = Trig::One;
        } else if self.b < 0.0 {
            self.b = -self.b;
            if self.trig == Trig::Sin {
                self.c = -self.c;
            }
        }
        self
    }

    fn mul(&self, o: &Term) -> Vec<Term> {
        let c = self.c * o.c;
        let k = self.k + o.k;
        let a = self.a + o.a;
        let mk = |c: f64, b: f64, trig: Trig| Term { c, k, a, b, trig }.normalised();
        let (b1, b2) = (self.b, o.b);
        match (self.trig, o.trig) {
            (Trig::One, t) => vec![mk(c, b2, t)],
            (t, Trig::One) => vec![mk(c, b1, t)],
            (Trig::Cos, Trig::Cos) => vec![
                mk(c / 2.0, b1 - b2, Trig::Cos),
                mk(c / 2.0, b1 + b2, Trig::Cos),
            ],
            (Trig::Sin, Trig::Sin) => vec![
                mk(c / 2.0, b1 - b2, Trig::Cos),
                mk(-c / 2.0, b1 + b2, Trig::Cos),
            ],
            (Trig::Sin, Trig::Cos) => vec![
                mk(c / 2.0, b1 + b2, Trig::Sin),
                mk(c / 2.0, b1 - b2, Trig::Sin),
            ],
            (Trig::Cos, Trig::Sin) => vec![
                mk(c / 2.0, b1 + b2, Trig::Sin),
                mk(c / 2.0, b2 - b1, Trig::Sin),
            ],
        }
    }

    fn derivative(&self) -> Vec<Term> {
        let mut out = Vec::new();
        if self.k > 0 {
            out.push(Term {
                c: self.c * self.k as f64,
                k: self.k - 1,
                ..*self
            });
        }
        if self.a != 0.0 {
            out.push(Term {
                c: self.c * self.a,
                ..*self
            });
        }
        match self.trig {
            Trig::One => {}
            Trig::Cos => out.push(Term {
                c: -self.c * self.b,
                trig: Trig::Sin,
                ..*self
            }),
            Trig::Sin => out.push(Term {
                c: self.c * self.b,
                trig: Trig::Cos,
                ..*self
            }),
        }
        out
    }
}

/// A finite sum of terms.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Signal {
    pub terms: Vec<Term>,
}

impl Signal {
    pub fn zero() -> Signal {
        Signal::default()
    }

    pub fn constant(c: f64) -> Signal {
        Signal::from_terms(vec![Term {
            c,
            k: 0,
            a: 0.0,
            b: 0.0,
            trig: Trig::One,
        }])
    }

    pub fn t_pow(k: u32) -> Signal {
        Signal::from_terms(vec![Term {
            c: 1.0,
            k,
            a: 0.0,
            b: 0.0,
            trig: Trig::One,
        }])
    }

    pub fn exp(a: f64) -> Signal {
        Signal::from_terms(vec![Term {
            c: 1.0,
            k: 0,
            a,
            b: 0.0,
            trig: Trig::One,
        }])
    }

    pub fn sin(b: f64) -> Signal {
        Signal::from_terms(vec![Term {
            c: 1.0,
            k: 0,
            a: 0.0,
            b,
            trig: Trig::Sin,
        }
        .normalised()])
    }

    pub fn cos(b: f64) -> Signal {
        Signal::from_terms(vec![Term {
            c: 1.0,
            k: 0,
            a: 0.0,
            b,
            trig: Trig::Cos,
        }
        .normalised()])
    }

    /// Merges like terms and drops zeros.
    pub fn from_terms(terms: Vec<Term>) -> Signal {
        let mut out: Vec<Term> = Vec::new();
        for t in terms.into_iter().map(Term::normalised) {
            match out
                .iter_mut()
                .find(|o| o.k == t.k && o.a == t.a && o.b == t.b && o.trig == t.trig)
            {
                Some(o) => o.c += t.c,
                None => out.push(t),
            }
        }
        out.retain(|t| t.c != 0.0);
        Signal { terms: out }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|x| x.eval(t)).sum()
    }

    pub fn add(&self, o: &Signal) -> Signal {
        Signal::from_terms(self.terms.iter().chain(&o.terms).copied().collect())
    }

    pub fn scale(&self, c: f64) -> Signal {
        Signal::from_terms(self.terms.iter().map(|t| Term { c: t.c * c, ..*t }).collect())
    }

    pub fn mul(&self, o: &Signal) -> Signal {
        let mut v = Vec::new();
        for x in &self.terms {
            for y in &o.terms {
                v.extend(x.mul(y));
            }
        }
        Signal::from_terms(v)
    }

    pub fn derivative(&self) -> Signal {
        Signal::from_terms(self.terms.iter().flat_map(|t| t.derivative()).collect())
    }

    /// Value and the first `count - 1` derivatives at t.
    pub fn derivs(&self, t: f64, count: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(count);
        let mut cur = self.clone();
        for _ in 0..count {
            out.push(cur.eval(t));
            cur = cur.derivative();
        }
        out
    }

    pub fn parse(src: &str) -> Result<Signal> {
        let mut p = Parser {
            s: src.as_bytes(),
            pos: 0,
        };
        let v = p.sum()?;
        p.ws();
        if p.pos != p.s.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(v)
    }
}

impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", t.c)?;
            if t.k > 0 {
                write!(f, "*t^{}", t.k)?;
            }
            if t.a != 0.0 {
                write!(f, "*exp({}*t)", t.a)?;
            }
            match t.trig {
                Trig::One => {}
                Trig::Cos => write!(f, "*cos({}*t)", t.b)?,
                Trig::Sin => write!(f, "*sin({}*t)", t.b)?,
            }
        }
        Ok(())
    }
}

/// One signal per port, separated by ';'.
pub fn parse_signals(src: &str, ports: usize) -> Result<Vec<Signal>> {
    let parts: Vec<&str> = src.split(';').collect();
    if parts.len() != ports {
        return Err(Error::parse(
            "input",
            format!("expected {ports} ';'-separated signals, got {}", parts.len()),
        ));
    }
    parts
        .iter()
        .enumerate()
        .map(|(i, s)| {
            Signal::parse(s).map_err(|e| match e {
                Error::Parse { location, message } => {
                    Error::parse(format!("input[{i}] {location}"), message)
                }
                e => e,
            })
        })
        .collect()
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::parse(format!("column {}", self.pos + 1), msg)
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Signal> {
        let mut acc = if self.eat(b'-') {
            self.product()?.scale(-1.0)
        } else {
            self.eat(b'+');
            self.product()?
        };
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.product()?);
            } else if self.eat(b'-') {
                acc = acc.add(&self.product()?.scale(-1.0));
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Signal> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.factor()?);
            } else if self.eat(b'/') {
                let d = self.number()?;
                if d == 0.0 {
                    return Err(self.err("division by zero"));
                }
                acc = acc.scale(1.0 / d);
            } else if matches!(self.peek(), Some(c) if c.is_ascii_alphabetic() || c == b'(') {
                // implicit product such as `2t` or `t sin(t)`
                acc = acc.mul(&self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn number(&mut self) -> Result<f64> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() {
            let c = self.s[self.pos];
            let exp_sign = (c == b'-' || c == b'+')
                && self.pos > start
                && matches!(self.s[self.pos - 1], b'e' | b'E');
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                if (c == b'e' || c == b'E')
                    && !self
                        .s
                        .get(self.pos + 1)
                        .is_some_and(|n| n.is_ascii_digit() || *n == b'-' || *n == b'+')
                {
                    break;
                }
                self.pos += 1;
            } else {
                break;
            }
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
        txt.parse::<f64>().map_err(|_| {
            self.pos = start;
            self.err("expected a number")
        })
    }

    fn ident(&mut self) -> String {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    /// The argument of an atom must be linear in t: `t`, `2*t`, `-0.5t`.
    fn linear_arg(&mut self) -> Result<f64> {
        if !self.eat(b'(') {
            return Err(self.err("expected '('"));
        }
        let inner = self.sum()?;
        if !self.eat(b')') {
            return Err(self.err("expected ')'"));
        }
        match inner.terms.as_slice() {
            [] => Ok(0.0),
            [t] if t.k == 1 && t.a == 0.0 && t.trig == Trig::One => Ok(t.c),
            _ => Err(self.err("atom argument must be of the form c*t")),
        }
    }

    fn factor(&mut self) -> Result<Signal> {
        let base = match self.peek() {
            None => return Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let v = self.sum()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                v
            }
            Some(b'-') => {
                self.pos += 1;
                return Ok(self.factor()?.scale(-1.0));
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => Signal::constant(self.number()?),
            Some(c) if c.is_ascii_alphabetic() => {
                let at = self.pos;
                let name = self.ident();
                match name.as_str() {
                    "t" => Signal::t_pow(1),
                    "pi" => Signal::constant(std::f64::consts::PI),
                    "sin" => Signal::sin(self.linear_arg()?),
                    "cos" => Signal::cos(self.linear_arg()?),
                    "exp" => Signal::exp(self.linear_arg()?),
                    _ => {
                        self.pos = at;
                        return Err(self.err(&format!("unknown signal atom '{name}'")));
                    }
                }
            }
            Some(_) => return Err(self.err("unexpected character")),
        };
        if self.eat(b'^') {
            let e = self.number()?;
            if e < 0.0 || e.fract() != 0.0 || e > 64.0 {
                return Err(self.err("exponent must be a small non-negative integer"));
            }
            let mut acc = Signal::constant(1.0);
            for _ in 0..e as u32 {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12 * (1.0 + b.abs())
    }

    #[test]
    fn parses_and_evaluates() {
        let s = Signal::parse("sin(t)").unwrap();
        assert!(close(s.eval(0.7), 0.7f64.sin()));
        let s = Signal::parse("2*t^2*exp(-0.5*t) - cos(3t) + 1").unwrap();
        let t: f64 = 1.3;
        assert!(close(s.eval(t), 2.0 * t * t * (-0.5 * t).exp() - (3.0 * t).cos() + 1.0));
        let s = Signal::parse("sin(2*t)*cos(t)").unwrap();
        assert!(close(s.eval(t), (2.0 * t).sin() * t.cos()));
        let s = Signal::parse("sin(t)^2 + cos(t)^2").unwrap();
        assert!(close(s.eval(t), 1.0));
        let s = Signal::parse("t/2 + 1e-3").unwrap();
        assert!(close(s.eval(t), t / 2.0 + 1e-3));
    }

    #[test]
    fn derivatives_are_exact() {
        let s = Signal::parse("t*exp(-t)*sin(2t)").unwrap();
        let t: f64 = 0.9;
        let h = 1e-5;
        let fd = (s.eval(t + h) - s.eval(t - h)) / (2.0 * h);
        assert!((s.derivative().eval(t) - fd).abs() < 1e-8);
    }

    #[test]
    fn rejects_unknown_atoms() {
        let e = Signal::parse("tan(t)").unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
        assert!(Signal::parse("sin(t*t)").is_err());
        assert!(parse_signals("sin(t)", 2).is_err());
        assert_eq!(parse_signals("sin(t); 0", 2).unwrap()[1], Signal::zero());
    }
}
