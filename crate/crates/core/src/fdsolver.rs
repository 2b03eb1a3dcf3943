//! Method-of-lines evolution of the general quasilinear equation with
//! second-order central differences and classical RK4 in time.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::equations::PdeCoefficients;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::ScalarField;

/// Safety factor in `Δt ≤ CFL·Δx²/max|k_eff|`.
pub const CFL: f64 = 0.25;
/// Smallest run of nodes handed to one worker.
const RHS_CHUNK: usize = 512;
/// Steps below this abort the run.
pub const DT_MIN: f64 = 1e-9;

#[derive(Clone, Debug)]
pub enum Boundary {
    /// Boundary values sampled from a reference field.
    Dirichlet(ScalarField),
    /// Mirror ghost points, `u_x = 0`.
    NeumannZero,
}

impl Boundary {
    fn label(&self) -> &'static str {
        match self {
            Boundary::Dirichlet(_) => "dirichlet",
            Boundary::NeumannZero => "neumann-zero",
        }
    }
}

/// Run metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scheme {
    pub dx: f64,
    pub steps: usize,
    pub dt_min: f64,
    pub dt_max: f64,
    /// Largest `Δt·max|k_eff|/Δx²` over accepted steps.
    pub cfl_max: f64,
    pub boundary: String,
}

/// Samples `values[j][i] ≈ u(xs[i], ts[j])`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSolution {
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub scheme: Scheme,
}

/// Error norms at one output time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Norms {
    pub t: f64,
    pub linf: f64,
    /// Discrete `L2` norm, `(Δx Σ e²)^{1/2}`.
    pub l2: f64,
}

#[derive(Serialize)]
struct Summary<'a> {
    nx: usize,
    nt: usize,
    x_min: f64,
    x_max: f64,
    t_min: f64,
    t_max: f64,
    scheme: &'a Scheme,
}

impl GridSolution {
    /// Rows `t,x,u` with a header.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Io(e.to_string());
        out.write_record(["t", "x", "u"]).map_err(io)?;
        for (t, row) in self.ts.iter().zip(&self.values) {
            for (x, u) in self.xs.iter().zip(row) {
                out.serialize((t, x, u)).map_err(io)?;
            }
        }
        out.flush().map_err(|e| Error::Io(e.to_string()))
    }

    pub fn summary_json(&self) -> Result<String> {
        let s = Summary {
            nx: self.xs.len(),
            nt: self.ts.len(),
            x_min: self.xs[0],
            x_max: *self.xs.last().expect("non-empty"),
            t_min: self.ts[0],
            t_max: *self.ts.last().expect("non-empty"),
            scheme: &self.scheme,
        };
        serde_json::to_string_pretty(&s).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Coefficients at one point, `A u_t = B`.
struct Local {
    a: f64,
    k: f64,
}

/// Coefficients sampled per node, refreshed only when some depend on `t`.
struct Coefs {
    names: Vec<[f64; 12]>,
    constant_in_t: bool,
}

fn field_val(f: &ScalarField, x: f64, t: f64) -> Result<f64> {
    match f.as_real_const() {
        Some(c) => Ok(c),
        None => f.eval_real(x, t),
    }
}

impl Coefs {
    fn fields(c: &PdeCoefficients) -> [&ScalarField; 12] {
        [
            &c.b1, &c.b2, &c.h1, &c.h2, &c.h3, &c.g0, &c.k0, &c.k1, &c.phi[0], &c.phi[1], &c.phi[2], &c.phi[3],
        ]
    }

    fn new(c: &PdeCoefficients, xs: &[f64], t: f64) -> Result<Self> {
        let fs = Self::fields(c);
        let constant_in_t = fs.iter().all(|f| f.dt().is_zero());
        let mut names = Vec::with_capacity(xs.len());
        for &x in xs {
            let mut row = [0.0; 12];
            for (r, f) in row.iter_mut().zip(fs) {
                *r = field_val(f, x, t)?;
            }
            names.push(row);
        }
        Ok(Self { names, constant_in_t })
    }

    fn refresh(&mut self, c: &PdeCoefficients, xs: &[f64], t: f64) -> Result<()> {
        if !self.constant_in_t {
            *self = Self::new(c, xs, t)?;
            self.constant_in_t = false;
        }
        Ok(())
    }

    fn local(&self, i: usize, u: f64) -> Local {
        let k = &self.names[i];
        Local { a: 1.0 + k[0] * u + k[1] * u * u, k: k[6] + k[7] * u }
    }

    /// `(h1+h2u+h3u²)u_x + g0u_x² + (k0+k1u)u_xx − Σφ_i u^i`.
    fn rhs(&self, i: usize, u: f64, ux: f64, uxx: f64) -> f64 {
        let k = &self.names[i];
        let src = u * (k[8] + u * (k[9] + u * (k[10] + u * k[11])));
        (k[2] + k[3] * u + k[4] * u * u) * ux + k[5] * ux * ux + (k[6] + k[7] * u) * uxx - src
    }
}

struct Problem<'a> {
    c: &'a PdeCoefficients,
    xs: Vec<f64>,
    dx: f64,
    bc: &'a Boundary,
    exec: Exec,
}

impl Problem<'_> {
    fn ghosts(&self, u: &[f64]) -> (f64, f64) {
        match self.bc {
            Boundary::Dirichlet(_) => (f64::NAN, f64::NAN),
            Boundary::NeumannZero => (u[1], u[u.len() - 2]),
        }
    }

    fn apply_bc(&self, u: &mut [f64], t: f64) -> Result<()> {
        if let Boundary::Dirichlet(f) = self.bc {
            let n = u.len();
            u[0] = f.eval_real(self.xs[0], t)?;
            u[n - 1] = f.eval_real(self.xs[n - 1], t)?;
        }
        Ok(())
    }

    /// `u_t` at every node; zero at Dirichlet nodes.
    fn rate(&self, coefs: &Coefs, u: &[f64], t: f64) -> Result<Vec<f64>> {
        let n = u.len();
        let (gl, gr) = self.ghosts(u);
        let dirichlet = matches!(self.bc, Boundary::Dirichlet(_));
        let h = self.dx;
        let out = self.exec.map_min_len(n, RHS_CHUNK, |i| -> Result<f64> {
            if dirichlet && (i == 0 || i == n - 1) {
                return Ok(0.0);
            }
            let l = if i == 0 { gl } else { u[i - 1] };
            let r = if i == n - 1 { gr } else { u[i + 1] };
            let ux = (r - l) / (2.0 * h);
            let uxx = (r - 2.0 * u[i] + l) / (h * h);
            let loc = coefs.local(i, u[i]);
            if loc.a.abs() < 1e-12 || !loc.a.is_finite() {
                return Err(Error::NonparabolicAbort { t });
            }
            Ok(coefs.rhs(i, u[i], ux, uxx) / loc.a)
        });
        out.into_iter().collect()
    }

    /// `max |k_eff|`, erroring when `k_eff` is not positive somewhere.
    fn k_eff_max(&self, coefs: &Coefs, u: &[f64], t: f64) -> Result<f64> {
        let mut m = 0.0_f64;
        for (i, &v) in u.iter().enumerate() {
            let loc = coefs.local(i, v);
            let k = loc.k / loc.a;
            if !(k > 0.0) {
                return Err(Error::NonparabolicAbort { t });
            }
            m = m.max(k);
        }
        Ok(m)
    }
}

/// Evolves `u0` over `[x_min, x_max]` with spacing about `dx`, returning
/// samples at `n_out` equally spaced times in `t_span` (both ends included).
pub fn evolve(
    c: &PdeCoefficients,
    u0: &ScalarField,
    x_range: (f64, f64),
    dx: f64,
    t_span: (f64, f64),
    n_out: usize,
    bc: &Boundary,
    exec: Exec,
) -> Result<GridSolution> {
    let (xa, xb) = x_range;
    if !(dx > 0.0) || !(xb > xa) || n_out == 0 || !(t_span.1 >= t_span.0) {
        return Err(Error::InvalidGrid(format!("x {x_range:?}, dx {dx}, t {t_span:?}, {n_out} outputs")));
    }
    let nx = ((xb - xa) / dx).round() as usize + 1;
    if nx < 3 {
        return Err(Error::InvalidGrid("fewer than three nodes".into()));
    }
    let h = (xb - xa) / (nx - 1) as f64;
    let xs: Vec<f64> = (0..nx).map(|i| xa + h * i as f64).collect();
    let ts: Vec<f64> = if n_out == 1 {
        vec![t_span.1]
    } else {
        (0..n_out).map(|j| t_span.0 + (t_span.1 - t_span.0) * j as f64 / (n_out - 1) as f64).collect()
    };
    let p = Problem { c, xs: xs.clone(), dx: h, bc, exec };

    let mut t = t_span.0;
    let mut u = xs.iter().map(|&x| u0.eval_real(x, t)).collect::<Result<Vec<f64>>>()?;
    p.apply_bc(&mut u, t)?;
    let mut coefs = Coefs::new(c, &xs, t)?;
    let mut values = Vec::with_capacity(ts.len());
    let mut scheme =
        Scheme { dx: h, steps: 0, dt_min: f64::INFINITY, dt_max: 0.0, cfl_max: 0.0, boundary: bc.label().into() };

    for &t_out in &ts {
        while t < t_out {
            let kmax = p.k_eff_max(&coefs, &u, t)?;
            let dt_cfl = if kmax > 0.0 { CFL * h * h / kmax } else { f64::INFINITY };
            let remaining = t_out - t;
            let dt = dt_cfl.min(remaining);
            if dt < DT_MIN && remaining > DT_MIN {
                return Err(Error::StabilityAbort { t, dt });
            }
            u = rk4_step(&p, &mut coefs, &u, t, dt)?;
            t = if dt == remaining { t_out } else { t + dt };
            scheme.steps += 1;
            if dt < remaining {
                scheme.dt_min = scheme.dt_min.min(dt);
            }
            scheme.dt_max = scheme.dt_max.max(dt);
            scheme.cfl_max = scheme.cfl_max.max(dt * kmax / (h * h));
        }
        values.push(u.clone());
    }
    if !scheme.dt_min.is_finite() {
        scheme.dt_min = scheme.dt_max;
    }
    Ok(GridSolution { xs, ts, values, scheme })
}

fn rk4_step(p: &Problem<'_>, coefs: &mut Coefs, u: &[f64], t: f64, dt: f64) -> Result<Vec<f64>> {
    let axpy = |a: &[f64], k: &[f64], s: f64| -> Vec<f64> { a.iter().zip(k).map(|(x, y)| x + s * y).collect() };
    let stage = |coefs: &mut Coefs, v: Vec<f64>, ts: f64| -> Result<Vec<f64>> {
        let mut v = v;
        p.apply_bc(&mut v, ts)?;
        coefs.refresh(p.c, &p.xs, ts)?;
        let r = p.rate(coefs, &v, ts)?;
        if r.iter().any(|v| !v.is_finite()) {
            return Err(Error::StabilityAbort { t: ts, dt });
        }
        Ok(r)
    };
    let k1 = stage(coefs, u.to_vec(), t)?;
    let k2 = stage(coefs, axpy(u, &k1, 0.5 * dt), t + 0.5 * dt)?;
    let k3 = stage(coefs, axpy(u, &k2, 0.5 * dt), t + 0.5 * dt)?;
    let k4 = stage(coefs, axpy(u, &k3, dt), t + dt)?;
    let mut next: Vec<f64> =
        (0..u.len()).map(|i| u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect();
    p.apply_bc(&mut next, t + dt)?;
    coefs.refresh(p.c, &p.xs, t + dt)?;
    Ok(next)
}

/// Error norms of `numeric` against `exact` at every output time. Points
/// where `exact` cannot be evaluated are skipped.
pub fn compare(exact: &ScalarField, numeric: &GridSolution) -> Vec<Norms> {
    numeric
        .ts
        .iter()
        .zip(&numeric.values)
        .map(|(&t, row)| {
            let errs: Vec<f64> = numeric
                .xs
                .iter()
                .zip(row)
                .filter_map(|(&x, &v)| exact.eval_real(x, t).ok().map(|e| (e - v).abs()))
                .collect();
            norms(t, &errs, numeric.scheme.dx)
        })
        .collect()
}

fn norms(t: f64, errs: &[f64], dx: f64) -> Norms {
    Norms {
        t,
        linf: errs.iter().copied().fold(0.0, f64::max),
        l2: (dx * errs.iter().map(|e| e * e).sum::<f64>()).sqrt(),
    }
}

/// Norms of `a − b` for two runs on the same grid.
pub fn compare_runs(a: &GridSolution, b: &GridSolution) -> Result<Vec<Norms>> {
    if a.xs != b.xs || a.ts != b.ts {
        return Err(Error::GridMismatch(format!(
            "{}x{} vs {}x{} samples",
            a.xs.len(),
            a.ts.len(),
            b.xs.len(),
            b.ts.len()
        )));
    }
    Ok(a.ts
        .iter()
        .zip(a.values.iter().zip(&b.values))
        .map(|(&t, (ra, rb))| {
            let errs: Vec<f64> = ra.iter().zip(rb).map(|(x, y)| (x - y).abs()).collect();
            norms(t, &errs, a.scheme.dx)
        })
        .collect())
}

/// One row of a refinement study.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub dx: f64,
    pub linf: f64,
    /// Observed order against the previous row.
    pub order: Option<f64>,
}

/// `L∞` error at `t1` for each spacing and the observed orders.
pub fn order_study(
    c: &PdeCoefficients,
    exact: &ScalarField,
    x_range: (f64, f64),
    dxs: &[f64],
    t_span: (f64, f64),
    exec: Exec,
) -> Result<Vec<Refinement>> {
    let bc = Boundary::Dirichlet(exact.clone());
    let mut out: Vec<Refinement> = Vec::new();
    for &dx in dxs {
        let sol = evolve(c, exact, x_range, dx, t_span, 1, &bc, exec)?;
        let linf = compare(exact, &sol)[0].linf;
        let order = out.last().map(|p| (p.linf / linf).ln() / (p.dx / dx).ln());
        out.push(Refinement { dx, linf, order });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilibrium_stays_put() {
        // Roots of u(1 − u²): u ≡ 1 is an equilibrium of the FhNS equation.
        let c = PdeCoefficients::fhns(1.0, 1.0);
        let one = ScalarField::one();
        let sol = evolve(&c, &one, (-2.0, 2.0), 0.1, (0.0, 1.0), 3, &Boundary::NeumannZero, Exec::Sequential).unwrap();
        for row in &sol.values {
            assert!(row.iter().all(|v| (v - 1.0).abs() <= 1e-12));
        }
    }

    #[test]
    fn backward_diffusion_is_rejected() {
        let c = PdeCoefficients { k0: (-1.0).into(), ..PdeCoefficients::default() };
        let u0 = (-ScalarField::x().square()).exp();
        let r = evolve(&c, &u0, (-2.0, 2.0), 0.1, (0.0, 0.1), 2, &Boundary::NeumannZero, Exec::Sequential);
        assert!(matches!(r, Err(Error::NonparabolicAbort { .. })));
    }

    #[test]
    fn mismatched_runs() {
        let c = PdeCoefficients { k0: 1.0.into(), ..PdeCoefficients::default() };
        let u0 = (-ScalarField::x().square()).exp();
        let bc = Boundary::NeumannZero;
        let a = evolve(&c, &u0, (-2.0, 2.0), 0.1, (0.0, 0.1), 2, &bc, Exec::Sequential).unwrap();
        let b = evolve(&c, &u0, (-2.0, 2.0), 0.05, (0.0, 0.1), 2, &bc, Exec::Sequential).unwrap();
        assert!(matches!(compare_runs(&a, &b), Err(Error::GridMismatch(_))));
        assert!(compare_runs(&a, &a).unwrap().iter().all(|n| n.linf == 0.0));
    }
}
