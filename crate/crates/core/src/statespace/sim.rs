//! Fixed-step RK4 simulation with cumulative energy integrals.

use nalgebra::{DMatrix, DVector};

use super::{Signal, StateSpace};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub u: Vec<DVector<f64>>,
    pub x: Vec<DVector<f64>>,
    pub y: Vec<DVector<f64>>,
    /// e(t) = ∫_{t0}^{t} uᵀy dτ
    pub energy: Vec<f64>,
    pub h: f64,
}

impl Trajectory {
    pub fn final_energy(&self) -> f64 {
        *self.energy.last().unwrap_or(&0.0)
    }

    /// Header `t,u1..,y1..,x1..,energy` followed by one row per sample.
    pub fn to_csv(&self) -> String {
        let n = self.u.first().map_or(0, |v| v.len());
        let d = self.x.first().map_or(0, |v| v.len());
        let mut cols = vec!["t".to_string()];
        cols.extend((1..=n).map(|i| format!("u{i}")));
        cols.extend((1..=n).map(|i| format!("y{i}")));
        cols.extend((1..=d).map(|i| format!("x{i}")));
        cols.push("energy".into());
        let mut out = cols.join(",");
        out.push('\n');
        for k in 0..self.t.len() {
            let mut row = vec![fmt_num(self.t[k])];
            row.extend(self.u[k].iter().map(|v| fmt_num(*v)));
            row.extend(self.y[k].iter().map(|v| fmt_num(*v)));
            row.extend(self.x[k].iter().map(|v| fmt_num(*v)));
            row.push(fmt_num(self.energy[k]));
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn fmt_num(v: f64) -> String {
    format!("{v:.12e}")
}

/// Running integral of uniformly spaced samples: Simpson's rule on even
/// indices; odd indices add one interval with the four-point rule, so every
/// entry is exact on cubics.
pub fn cumulative_integral(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut e = vec![0.0; n];
    match n {
        0 | 1 => return e,
        2 => {
            e[1] = 0.5 * h * (f[0] + f[1]);
            return e;
        }
        3 => {
            e[1] = h * (5.0 * f[0] + 8.0 * f[1] - f[2]) / 12.0;
            e[2] = h / 3.0 * (f[0] + 4.0 * f[1] + f[2]);
            return e;
        }
        _ => {}
    }
    e[1] = h * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) / 24.0;
    for k in 2..n {
        e[k] = if k % 2 == 0 {
            e[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k])
        } else {
            e[k - 1] + h * (f[k - 3] - 5.0 * f[k - 2] + 19.0 * f[k - 1] + 9.0 * f[k]) / 24.0
        };
    }
    e
}

fn input_at(u: &[Signal], t: f64) -> DVector<f64> {
    DVector::from_iterator(u.len(), u.iter().map(|s| s.eval(t)))
}

/// Classical RK4 on [t0, t1]; the step is shrunk to (t1 − t0)/N with
/// N = ⌈(t1 − t0)/h⌉.
pub fn simulate(
    ss: &StateSpace,
    x0: &DVector<f64>,
    u: &[Signal],
    t0: f64,
    t1: f64,
    h: f64,
) -> Result<Trajectory> {
    let d = ss.order();
    let n = ss.ports();
    if x0.len() != d {
        return Err(Error::Dimension(format!("x0 has {} entries, need {d}", x0.len())));
    }
    if u.len() != n {
        return Err(Error::Dimension(format!("{} input signals for {n} ports", u.len())));
    }
    if !(h > 0.0) || !(t1 >= t0) || !h.is_finite() || !t1.is_finite() {
        return Err(Error::Dimension("need h > 0 and t1 >= t0".into()));
    }
    let steps = ((t1 - t0) / h).ceil().max(0.0) as usize;
    let h = if steps == 0 { h } else { (t1 - t0) / steps as f64 };
    let (a, b, c, dd) = (ss.af(), ss.bf(), ss.cf(), ss.df());
    let f = |t: f64, x: &DVector<f64>| -> DVector<f64> { &a * x + &b * input_at(u, t) };
    let mut ts = Vec::with_capacity(steps + 1);
    let mut xs = Vec::with_capacity(steps + 1);
    let mut x = x0.clone();
    for k in 0..=steps {
        let t = t0 + k as f64 * h;
        ts.push(t);
        xs.push(x.clone());
        if k == steps {
            break;
        }
        let k1 = f(t, &x);
        let k2 = f(t + h / 2.0, &(&x + &k1 * (h / 2.0)));
        let k3 = f(t + h / 2.0, &(&x + &k2 * (h / 2.0)));
        let k4 = f(t + h, &(&x + &k3 * h));
        x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    let us: Vec<DVector<f64>> = ts.iter().map(|&t| input_at(u, t)).collect();
    let ys: Vec<DVector<f64>> = xs.iter().zip(&us).map(|(x, u)| &c * x + &dd * u).collect();
    let power: Vec<f64> = us.iter().zip(&ys).map(|(u, y)| u.dot(y)).collect();
    Ok(Trajectory {
        energy: cumulative_integral(&power, h),
        t: ts,
        u: us,
        x: xs,
        y: ys,
        h,
    })
}

/// Both sides of ∫ 2uᵀy dt − [xᵀXx] = ∫ |Lx + Wu|² dt on a trajectory.
#[derive(Clone, Debug)]
pub struct StorageCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// ∫ uᵀy − ½[xᵀXx]; nonnegative for a storage function.
    pub dissipation_gap: f64,
}

pub fn storage_check(
    x_mat: &DMatrix<f64>,
    l: &DMatrix<f64>,
    w: &DMatrix<f64>,
    traj: &Trajectory,
) -> StorageCheck {
    let q: Vec<f64> = traj
        .x
        .iter()
        .zip(&traj.u)
        .map(|(x, u)| {
            let r = if l.nrows() == 0 { DVector::zeros(0) } else { l * x + w * u };
            r.norm_squared()
        })
        .collect();
    let rhs = *cumulative_integral(&q, traj.h).last().unwrap_or(&0.0);
    let quad = |x: &DVector<f64>| (x.transpose() * x_mat * x)[(0, 0)];
    let jump = match (traj.x.first(), traj.x.last()) {
        (Some(a), Some(b)) => quad(b) - quad(a),
        _ => 0.0,
    };
    let supplied = traj.final_energy();
    let lhs = 2.0 * supplied - jump;
    StorageCheck {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        dissipation_gap: supplied - 0.5 * jump,
    }
}
