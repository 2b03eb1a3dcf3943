use serde::{Deserialize, Serialize};

use super::Var;
use crate::error::{Error, Result};
use crate::jet::Jet2;

/// Samples on a uniform `(t, x)` lattice, row-major in `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub x0: f64,
    pub hx: f64,
    pub nx: usize,
    pub t0: f64,
    pub ht: f64,
    pub nt: usize,
    pub values: Vec<f64>,
}

impl Table {
    pub fn new(x0: f64, hx: f64, nx: usize, t0: f64, ht: f64, nt: usize, values: Vec<f64>) -> Result<Self> {
        if nx < 2 || nt < 1 || values.len() != nx * nt || !(hx > 0.0) || (nt > 1 && !(ht > 0.0)) {
            return Err(Error::InvalidGrid(format!("table {nx}x{nt} with {} values", values.len())));
        }
        Ok(Self { x0, hx, nx, t0, ht, nt, values })
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    fn locate(p: f64, p0: f64, h: f64, n: usize) -> (usize, f64) {
        if n == 1 {
            return (0, 0.0);
        }
        let s = ((p - p0) / h).clamp(0.0, (n - 1) as f64);
        let i = (s.floor() as usize).min(n - 2);
        (i, s - i as f64)
    }

    /// Bilinear interpolation, clamped to the lattice.
    pub fn interp(&self, x: f64, t: f64) -> f64 {
        let (i, fx) = Self::locate(x, self.x0, self.hx, self.nx);
        let (j, ft) = Self::locate(t, self.t0, self.ht, self.nt);
        let row = |j: usize| self.at(i, j) * (1.0 - fx) + self.at(i + 1, j) * fx;
        if self.nt == 1 {
            row(0)
        } else {
            row(j) * (1.0 - ft) + row(j + 1) * ft
        }
    }

    /// Value by interpolation, derivative slots by central differences with
    /// the lattice spacing as step.
    pub fn eval_jet(&self, x: f64, t: f64) -> Result<Jet2<f64>> {
        let xmax = self.x0 + self.hx * (self.nx - 1) as f64;
        if x < self.x0 - 1e-12 || x > xmax + 1e-12 {
            return Err(Error::Domain(format!("x={x} outside tabulated range")));
        }
        let f = |dx: f64, dt: f64| self.interp(x + dx, t + dt);
        let (hx, ht) = (self.hx, if self.nt > 1 { self.ht } else { 0.0 });
        let c = f(0.0, 0.0);
        let dx = (f(hx, 0.0) - f(-hx, 0.0)) / (2.0 * hx);
        let dxx = (f(hx, 0.0) - 2.0 * c + f(-hx, 0.0)) / (hx * hx);
        let (dt, dxt) = if ht > 0.0 {
            (
                (f(0.0, ht) - f(0.0, -ht)) / (2.0 * ht),
                (f(hx, ht) - f(-hx, ht) - f(hx, -ht) + f(-hx, -ht)) / (4.0 * hx * ht),
            )
        } else {
            (0.0, 0.0)
        };
        Ok(Jet2 { value: c, dx, dt, dxx, dxt })
    }

    /// Lattice of central-difference derivatives (one-sided at the edges).
    pub fn differentiate(&self, v: Var) -> Table {
        let mut out = vec![0.0; self.values.len()];
        for j in 0..self.nt {
            for i in 0..self.nx {
                out[j * self.nx + i] = match v {
                    Var::X => {
                        let (l, r) = (i.saturating_sub(1), (i + 1).min(self.nx - 1));
                        (self.at(r, j) - self.at(l, j)) / ((r - l) as f64 * self.hx)
                    }
                    Var::T if self.nt > 1 => {
                        let (l, r) = (j.saturating_sub(1), (j + 1).min(self.nt - 1));
                        (self.at(i, r) - self.at(i, l)) / ((r - l) as f64 * self.ht)
                    }
                    Var::T => 0.0,
                };
            }
        }
        Table { values: out, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_is_differentiated_to_second_order() {
        let (nx, nt) = (41, 11);
        let vals: Vec<f64> = (0..nt)
            .flat_map(|j| (0..nx).map(move |i| {
                let x = -1.0 + 0.05 * i as f64;
                let t = 0.1 * j as f64;
                x * x * (1.0 + t)
            }))
            .collect();
        let tab = Table::new(-1.0, 0.05, nx, 0.0, 0.1, nt, vals).unwrap();
        let j = tab.eval_jet(0.2, 0.5).unwrap();
        assert!((j.value - 0.04 * 1.5).abs() < 1e-12);
        assert!((j.dx - 0.4 * 1.5).abs() < 1e-10);
        assert!((j.dxx - 2.0 * 1.5).abs() < 1e-8);
        assert!((j.dt - 0.04).abs() < 1e-10);
        assert!((j.dxt - 0.4).abs() < 1e-8);
    }
}
