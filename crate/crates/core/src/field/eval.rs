use num_complex::Complex64;

use super::{Node, ScalarField};
use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::quad;
use crate::scalar::Scalar;

/// Denominator magnitude below which evaluation reports a pole.
pub const EPS_POLE: f64 = 1e-12;

#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    pub eps_pole: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self { eps_pole: EPS_POLE }
    }
}

struct Ctx<'a, S> {
    x: f64,
    t: f64,
    opts: EvalOptions,
    dens: Option<&'a mut Vec<Complex64>>,
    cache: Vec<(usize, Jet2<S>)>,
}

impl<S: Scalar> Ctx<'_, S> {
    fn record(&mut self, d: S) {
        if let Some(v) = self.dens.as_deref_mut() {
            v.push(d.to_complex());
        }
    }

    fn pole(&self, d: S) -> Result<()> {
        if d.norm() < self.opts.eps_pole || !d.is_finite() {
            Err(Error::Pole { x: self.x, t: self.t, magnitude: d.norm() })
        } else {
            Ok(())
        }
    }
}

impl ScalarField {
    /// Value and derivatives at `(x, t)`.
    pub fn eval_jet<S: Scalar>(&self, x: f64, t: f64) -> Result<Jet2<S>> {
        let mut ctx = Ctx { x, t, opts: EvalOptions::default(), dens: None, cache: Vec::new() };
        self.jet_in(&mut ctx)
    }

    /// Like [`eval_jet`](Self::eval_jet), also pushing the value of every
    /// denominator met on the way into `dens`.
    pub fn eval_jet_recording<S: Scalar>(&self, x: f64, t: f64, dens: &mut Vec<Complex64>) -> Result<Jet2<S>> {
        let mut ctx = Ctx { x, t, opts: EvalOptions::default(), dens: Some(dens), cache: Vec::new() };
        self.jet_in(&mut ctx)
    }

    pub fn eval<S: Scalar>(&self, x: f64, t: f64) -> Result<S> {
        Ok(self.eval_jet::<S>(x, t)?.value)
    }

    pub fn eval_real(&self, x: f64, t: f64) -> Result<f64> {
        self.eval::<f64>(x, t)
    }

    pub fn eval_complex(&self, x: f64, t: f64) -> Result<Complex64> {
        self.eval::<Complex64>(x, t)
    }

    fn jet_in<S: Scalar>(&self, ctx: &mut Ctx<'_, S>) -> Result<Jet2<S>> {
        let cacheable = matches!(self.node(), Node::Quad { .. } | Node::Ode { .. } | Node::Exp(_));
        if cacheable {
            let id = self.ptr_id();
            if let Some((_, j)) = ctx.cache.iter().find(|(k, _)| *k == id) {
                return Ok(*j);
            }
            let j = self.jet_uncached(ctx)?;
            ctx.cache.push((id, j));
            return Ok(j);
        }
        self.jet_uncached(ctx)
    }

    fn jet_uncached<S: Scalar>(&self, ctx: &mut Ctx<'_, S>) -> Result<Jet2<S>> {
        let two = S::from_f64(2.0);
        Ok(match self.node() {
            Node::Const(c) => {
                let v = S::from_complex(*c)
                    .ok_or_else(|| Error::Domain(format!("complex constant {c} in real mode")))?;
                Jet2::constant(v)
            }
            Node::X => Jet2::var_x(ctx.x),
            Node::T => Jet2::var_t(ctx.t),
            Node::Add(a, b) => a.jet_in(ctx)? + b.jet_in(ctx)?,
            Node::Sub(a, b) => a.jet_in(ctx)? - b.jet_in(ctx)?,
            Node::Mul(a, b) => a.jet_in(ctx)? * b.jet_in(ctx)?,
            Node::Div(a, b) => {
                let n = a.jet_in(ctx)?;
                let d = b.jet_in(ctx)?;
                ctx.record(d.value);
                ctx.pole(d.value)?;
                n / d
            }
            Node::Neg(a) => -a.jet_in(ctx)?,
            Node::Exp(a) => a.jet_in(ctx)?.exp(),
            Node::Ln(a) => {
                let j = a.jet_in(ctx)?;
                ctx.record(j.value);
                ctx.pole(j.value)?;
                let l = j.value.ln().ok_or_else(|| Error::Domain(format!("ln of {:?}", j.value)))?;
                let inv = S::one() / j.value;
                j.chain(l, inv, -inv * inv)
            }
            Node::Tanh(a) => {
                let j = a.jet_in(ctx)?;
                let th = j.value.tanh();
                let s2 = S::one() - th * th;
                j.chain(th, s2, -two * th * s2)
            }
            Node::Cosh(a) => {
                let j = a.jet_in(ctx)?;
                let (c, s) = (j.value.cosh(), j.value.sinh());
                j.chain(c, s, c)
            }
            Node::Sinh(a) => {
                let j = a.jet_in(ctx)?;
                let (c, s) = (j.value.cosh(), j.value.sinh());
                j.chain(s, c, s)
            }
            Node::Sin(a) => {
                let j = a.jet_in(ctx)?;
                let (s, c) = (j.value.sin(), j.value.cos());
                j.chain(s, c, -s)
            }
            Node::Cos(a) => {
                let j = a.jet_in(ctx)?;
                let (s, c) = (j.value.sin(), j.value.cos());
                j.chain(c, -s, -c)
            }
            Node::Sqrt(a) => {
                let j = a.jet_in(ctx)?;
                let r = j.value.sqrt().ok_or_else(|| Error::Domain(format!("sqrt of {:?}", j.value)))?;
                ctx.record(r);
                ctx.pole(r)?;
                let d1 = S::one() / (two * r);
                j.chain(r, d1, -d1 / (two * j.value))
            }
            Node::Pow(a, p) => {
                let j = a.jet_in(ctx)?;
                if p.fract() == 0.0 && p.abs() <= 64.0 {
                    let n = *p as i32;
                    if n < 0 {
                        ctx.record(j.value);
                        ctx.pole(j.value)?;
                    }
                    j.powi(n)
                } else {
                    ctx.record(j.value);
                    ctx.pole(j.value)?;
                    let dom = || Error::Domain(format!("{:?}^{p}", j.value));
                    let v = j.value.powf(*p).ok_or_else(dom)?;
                    let d1 = S::from_f64(*p) * v / j.value;
                    let d2 = S::from_f64(p - 1.0) * d1 / j.value;
                    j.chain(v, d1, d2)
                }
            }
            Node::Quad { integrand, x_ref } => quad_jet(integrand, *x_ref, ctx.x, ctx.t)?,
            Node::Tab(table) => table.eval_jet(ctx.x, ctx.t)?.map(S::from_f64),
            Node::Ode { sol, order, arg } => {
                let j = arg.jet_in(ctx)?;
                let z = j.value;
                if z.im().abs() > 1e-12 * (1.0 + z.re().abs()) {
                    return Err(Error::Domain(format!("ODE argument off the real axis: {z:?}")));
                }
                let d = sol.derivatives(z.re(), *order as usize + 2)?;
                let k = *order as usize;
                j.chain(S::from_f64(d[k]), S::from_f64(d[k + 1]), S::from_f64(d[k + 2]))
            }
        })
    }
}

fn quad_jet<S: Scalar>(g: &ScalarField, x_ref: f64, x: f64, t: f64) -> Result<Jet2<S>> {
    let at = g.eval_jet::<S>(x, t)?;
    let integral = quad::integrate(
        |s| {
            let j = g.eval_jet::<S>(s, t)?;
            Ok([j.value, j.dt])
        },
        x_ref,
        x,
        quad::Tolerance::default(),
    )?;
    Ok(Jet2 { value: integral[0], dx: at.value, dt: integral[1], dxx: at.dx, dxt: at.dt })
}
