//! Dormand–Prince 5(4) integration of second-order linear ODEs with affine
//! coefficients, `A(z) v'' + B(z) v' + C(z) v = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients `A(z) = a[0] + a[1] z`, likewise `B`, `C`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearOde2 {
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub c: [f64; 2],
}

impl LinearOde2 {
    fn coeffs(&self, z: f64) -> (f64, f64, f64) {
        (self.a[0] + self.a[1] * z, self.b[0] + self.b[1] * z, self.c[0] + self.c[1] * z)
    }

    fn rhs(&self, z: f64, y: [f64; 2]) -> [f64; 2] {
        let (a, b, c) = self.coeffs(z);
        [y[1], -(b * y[1] + c * y[0]) / a]
    }

    /// `v, v', …, v^(n)` at `z` from `(v, v')`, using the differentiated ODE
    /// `A v^(k+2) + (kA' + B) v^(k+1) + (kB' + C) v^(k) + kC' v^(k-1) = 0`.
    pub fn higher_derivatives(&self, z: f64, v: f64, dv: f64, n: usize) -> Result<Vec<f64>> {
        let (a, b, c) = self.coeffs(z);
        if a.abs() < 1e-14 {
            return Err(Error::Pole { x: z, t: f64::NAN, magnitude: a.abs() });
        }
        let mut d = vec![v, dv];
        for k in 0..n.saturating_sub(1) {
            let kf = k as f64;
            let prev = if k > 0 { d[k - 1] } else { 0.0 };
            let next = -((kf * self.a[1] + b) * d[k + 1] + (kf * self.b[1] + c) * d[k] + kf * self.c[1] * prev) / a;
            d.push(next);
        }
        d.truncate(n + 1);
        Ok(d)
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy(y: [f64; 2], terms: &[(f64, [f64; 2])], h: f64) -> [f64; 2] {
    let mut out = y;
    for (w, k) in terms {
        out[0] += h * w * k[0];
        out[1] += h * w * k[1];
    }
    out
}

/// Integrates `y' = f(z, y)` from `z0` to `z1` with adaptive DOPRI5.
pub fn dopri5(f: impl Fn(f64, [f64; 2]) -> [f64; 2], z0: f64, y0: [f64; 2], z1: f64, tol: f64) -> Result<[f64; 2]> {
    let span = z1 - z0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut z = z0;
    let mut y = y0;
    let mut h = span.abs().min(1e-2 * (1.0 + z0.abs())) * dir;
    let mut k1 = f(z, y);
    for _ in 0..1_000_000 {
        if (z1 - z) * dir <= 0.0 {
            return Ok(y);
        }
        if (z + h - z1) * dir > 0.0 {
            h = z1 - z;
        }
        let k2 = f(z + C2 * h, axpy(y, &[(A21, k1)], h));
        let k3 = f(z + C3 * h, axpy(y, &[(A31, k1), (A32, k2)], h));
        let k4 = f(z + C4 * h, axpy(y, &[(A41, k1), (A42, k2), (A43, k3)], h));
        let k5 = f(z + C5 * h, axpy(y, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)], h));
        let k6 = f(z + h, axpy(y, &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)], h));
        let yn = axpy(y, &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)], h);
        let k7 = f(z + h, yn);
        let mut err = 0.0_f64;
        for i in 0..2 {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = tol + tol * y[i].abs().max(yn[i].abs());
            err = err.max((e / sc).abs());
        }
        if !err.is_finite() {
            h *= 0.1;
        } else if err <= 1.0 {
            z += h;
            y = yn;
            k1 = k7;
            h *= (0.9 * err.max(1e-10).powf(-0.2)).min(5.0);
        } else {
            h *= (0.9 * err.powf(-0.2)).max(0.2);
        }
        if h.abs() < 1e-14 * (1.0 + z.abs()) {
            return Err(Error::Domain(format!("ODE step underflow at z={z}")));
        }
    }
    Err(Error::Domain("ODE integration exceeded step budget".into()))
}

/// A particular solution of a [`LinearOde2`], fixed by `(v, v')` at `z0`
/// and tabulated at checkpoints across `[zlo, zhi]`; evaluation re-integrates
/// from the nearest checkpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct OdeSolution {
    pub ode: LinearOde2,
    pub z0: f64,
    pub v0: f64,
    pub dv0: f64,
    pub zlo: f64,
    pub zhi: f64,
    pub tol: f64,
    checkpoints: Vec<(f64, [f64; 2])>,
}

const CHECKPOINTS: usize = 256;

impl OdeSolution {
    pub fn new(ode: LinearOde2, z0: f64, v0: f64, dv0: f64, zlo: f64, zhi: f64, tol: f64) -> Result<Self> {
        if !(zlo <= z0 && z0 <= zhi) || !(zlo < zhi) {
            return Err(Error::Domain(format!("initial point {z0} outside [{zlo}, {zhi}]")));
        }
        let f = |z: f64, y: [f64; 2]| ode.rhs(z, y);
        let h = (zhi - zlo) / CHECKPOINTS as f64;
        let nodes: Vec<f64> = (0..=CHECKPOINTS).map(|i| zlo + h * i as f64).collect();
        let split = nodes.partition_point(|&z| z < z0);
        let mut checkpoints = vec![(z0, [v0, dv0])];
        let (mut zc, mut yc) = (z0, [v0, dv0]);
        for &z in &nodes[split..] {
            yc = dopri5(f, zc, yc, z, tol)?;
            zc = z;
            checkpoints.push((z, yc));
        }
        let (mut zc, mut yc) = (z0, [v0, dv0]);
        for &z in nodes[..split].iter().rev() {
            yc = dopri5(f, zc, yc, z, tol)?;
            zc = z;
            checkpoints.push((z, yc));
        }
        checkpoints.sort_by(|p, q| p.0.total_cmp(&q.0));
        Ok(Self { ode, z0, v0, dv0, zlo, zhi, tol, checkpoints })
    }

    /// `(v, v')` at `z`.
    pub fn state(&self, z: f64) -> Result<[f64; 2]> {
        let i = self.checkpoints.partition_point(|p| p.0 < z);
        let pick = match (i.checked_sub(1), self.checkpoints.get(i)) {
            (Some(l), Some(r)) => {
                if z - self.checkpoints[l].0 <= r.0 - z {
                    l
                } else {
                    i
                }
            }
            (Some(l), None) => l,
            (None, _) => 0,
        };
        let (zc, yc) = self.checkpoints[pick];
        dopri5(|z, y| self.ode.rhs(z, y), zc, yc, z, self.tol)
    }

    /// `v, v', …, v^(n)` at `z`.
    pub fn derivatives(&self, z: f64, n: usize) -> Result<Vec<f64>> {
        let [v, dv] = self.state(z)?;
        self.ode.higher_derivatives(z, v, dv, n)
    }
}
