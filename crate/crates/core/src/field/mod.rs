//! Scalar fields of `(x, t)` as shared expression trees.

mod diff;
mod eval;
mod sexpr;
mod table;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

pub use diff::Var;
pub use eval::{EvalOptions, EPS_POLE};
pub use table::Table;

use crate::ode::OdeSolution;

#[derive(Debug)]
pub enum Node {
    Const(Complex64),
    X,
    T,
    Add(ScalarField, ScalarField),
    Sub(ScalarField, ScalarField),
    Mul(ScalarField, ScalarField),
    Div(ScalarField, ScalarField),
    Neg(ScalarField),
    Exp(ScalarField),
    Ln(ScalarField),
    Tanh(ScalarField),
    Cosh(ScalarField),
    Sinh(ScalarField),
    Sin(ScalarField),
    Cos(ScalarField),
    Sqrt(ScalarField),
    Pow(ScalarField, f64),
    /// `∫_{x_ref}^{x} g(s, t) ds`; `x_ref` may be infinite.
    Quad { integrand: ScalarField, x_ref: f64 },
    /// Bilinear interpolation of grid data; derivatives are finite differences.
    Tab(Arc<Table>),
    /// `v^(order)(arg)` for `v` solving a tabulated linear ODE.
    Ode { sol: Arc<OdeSolution>, order: u32, arg: ScalarField },
}

/// Immutable, cheaply clonable expression tree.
#[derive(Clone)]
pub struct ScalarField(Arc<Node>);

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sexpr())
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexpr())
    }
}

impl ScalarField {
    pub fn new(node: Node) -> Self {
        ScalarField(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub(crate) fn ptr_id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn constant(v: f64) -> Self {
        Self::new(Node::Const(Complex64::new(v, 0.0)))
    }

    pub fn complex(re: f64, im: f64) -> Self {
        Self::new(Node::Const(Complex64::new(re, im)))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn x() -> Self {
        Self::new(Node::X)
    }

    pub fn t() -> Self {
        Self::new(Node::T)
    }

    pub fn as_const(&self) -> Option<Complex64> {
        match self.node() {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn as_real_const(&self) -> Option<f64> {
        self.as_const().filter(|c| c.im == 0.0).map(|c| c.re)
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(Complex64::new(0.0, 0.0))
    }

    fn is_one(&self) -> bool {
        self.as_const() == Some(Complex64::new(1.0, 0.0))
    }

    pub fn exp(&self) -> Self {
        match self.as_const() {
            Some(c) if c.im == 0.0 => Self::constant(c.re.exp()),
            _ => Self::new(Node::Exp(self.clone())),
        }
    }

    pub fn ln(&self) -> Self {
        Self::new(Node::Ln(self.clone()))
    }

    pub fn tanh(&self) -> Self {
        Self::new(Node::Tanh(self.clone()))
    }

    pub fn cosh(&self) -> Self {
        Self::new(Node::Cosh(self.clone()))
    }

    pub fn sinh(&self) -> Self {
        Self::new(Node::Sinh(self.clone()))
    }

    pub fn sin(&self) -> Self {
        Self::new(Node::Sin(self.clone()))
    }

    pub fn cos(&self) -> Self {
        Self::new(Node::Cos(self.clone()))
    }

    pub fn sqrt(&self) -> Self {
        match self.as_real_const() {
            Some(c) if c >= 0.0 => Self::constant(c.sqrt()),
            _ => Self::new(Node::Sqrt(self.clone())),
        }
    }

    pub fn powf(&self, p: f64) -> Self {
        if p == 1.0 {
            return self.clone();
        }
        if p == 0.0 {
            return Self::one();
        }
        Self::new(Node::Pow(self.clone(), p))
    }

    pub fn powi(&self, n: i32) -> Self {
        self.powf(n as f64)
    }

    pub fn square(&self) -> Self {
        self.powi(2)
    }

    pub fn recip(&self) -> Self {
        Self::one() / self.clone()
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::constant(k) * self.clone()
    }

    /// `∫_{x_ref}^{x} self(s, t) ds` as a lazily evaluated quadrature node.
    pub fn integrate_x(&self, x_ref: f64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self::new(Node::Quad { integrand: self.clone(), x_ref })
    }

    pub fn tabulated(table: Table) -> Self {
        Self::new(Node::Tab(Arc::new(table)))
    }

    /// `v^(order)(arg)` for an ODE solution `v`.
    pub fn ode(sol: Arc<OdeSolution>, order: u32, arg: ScalarField) -> Self {
        Self::new(Node::Ode { sol, order, arg })
    }

    fn children(&self) -> Vec<&ScalarField> {
        match self.node() {
            Node::Const(_) | Node::X | Node::T | Node::Tab(_) => vec![],
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => vec![a, b],
            Node::Neg(a)
            | Node::Exp(a)
            | Node::Ln(a)
            | Node::Tanh(a)
            | Node::Cosh(a)
            | Node::Sinh(a)
            | Node::Sin(a)
            | Node::Cos(a)
            | Node::Sqrt(a)
            | Node::Pow(a, _) => vec![a],
            Node::Quad { integrand, .. } => vec![integrand],
            Node::Ode { arg, .. } => vec![arg],
        }
    }

    /// True when any node reports finite-difference derivatives.
    pub fn is_approximate(&self) -> bool {
        matches!(self.node(), Node::Tab(_)) || self.children().iter().any(|c| c.is_approximate())
    }

    pub fn has_quadrature(&self) -> bool {
        matches!(self.node(), Node::Quad { .. }) || self.children().iter().any(|c| c.has_quadrature())
    }

    /// True when some constant has a nonzero imaginary part.
    pub fn has_complex_constants(&self) -> bool {
        matches!(self.node(), Node::Const(c) if c.im != 0.0)
            || self.children().iter().any(|c| c.has_complex_constants())
    }

    /// Number of nodes, counting shared subtrees once per reference.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Replaces `X` and `T` leaves.
    pub fn substitute(&self, x: &ScalarField, t: &ScalarField) -> ScalarField {
        let s = |f: &ScalarField| f.substitute(x, t);
        match self.node() {
            Node::Const(_) | Node::Tab(_) => self.clone(),
            Node::X => x.clone(),
            Node::T => t.clone(),
            Node::Add(a, b) => s(a) + s(b),
            Node::Sub(a, b) => s(a) - s(b),
            Node::Mul(a, b) => s(a) * s(b),
            Node::Div(a, b) => s(a) / s(b),
            Node::Neg(a) => -s(a),
            Node::Exp(a) => s(a).exp(),
            Node::Ln(a) => s(a).ln(),
            Node::Tanh(a) => s(a).tanh(),
            Node::Cosh(a) => s(a).cosh(),
            Node::Sinh(a) => s(a).sinh(),
            Node::Sin(a) => s(a).sin(),
            Node::Cos(a) => s(a).cos(),
            Node::Sqrt(a) => s(a).sqrt(),
            Node::Pow(a, p) => s(a).powf(*p),
            Node::Quad { .. } | Node::Ode { .. } => {
                panic!("substitute: quadrature and ODE nodes are not substitutable")
            }
        }
    }
}

impl From<f64> for ScalarField {
    fn from(v: f64) -> Self {
        ScalarField::constant(v)
    }
}

fn fold(a: &ScalarField, b: &ScalarField, f: impl Fn(Complex64, Complex64) -> Complex64) -> Option<ScalarField> {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Some(ScalarField::new(Node::Const(f(x, y)))),
        _ => None,
    }
}

impl Add for ScalarField {
    type Output = ScalarField;
    fn add(self, o: ScalarField) -> ScalarField {
        if let Some(c) = fold(&self, &o, |a, b| a + b) {
            return c;
        }
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        ScalarField::new(Node::Add(self, o))
    }
}

impl Sub for ScalarField {
    type Output = ScalarField;
    fn sub(self, o: ScalarField) -> ScalarField {
        if let Some(c) = fold(&self, &o, |a, b| a - b) {
            return c;
        }
        if o.is_zero() {
            return self;
        }
        if self.is_zero() {
            return -o;
        }
        ScalarField::new(Node::Sub(self, o))
    }
}

impl Mul for ScalarField {
    type Output = ScalarField;
    fn mul(self, o: ScalarField) -> ScalarField {
        if let Some(c) = fold(&self, &o, |a, b| a * b) {
            return c;
        }
        if self.is_zero() || o.is_zero() {
            return ScalarField::zero();
        }
        if self.is_one() {
            return o;
        }
        if o.is_one() {
            return self;
        }
        ScalarField::new(Node::Mul(self, o))
    }
}

impl Div for ScalarField {
    type Output = ScalarField;
    fn div(self, o: ScalarField) -> ScalarField {
        if o.is_one() {
            return self;
        }
        if !o.is_zero() {
            if let Some(c) = fold(&self, &o, |a, b| a / b) {
                return c;
            }
        }
        if self.is_zero() && !o.is_zero() {
            return ScalarField::zero();
        }
        ScalarField::new(Node::Div(self, o))
    }
}

impl Neg for ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        match self.as_const() {
            Some(c) => ScalarField::new(Node::Const(-c)),
            None => match self.node() {
                Node::Neg(a) => a.clone(),
                _ => ScalarField::new(Node::Neg(self)),
            },
        }
    }
}

macro_rules! ref_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<&ScalarField> for &ScalarField {
            type Output = ScalarField;
            fn $m(self, o: &ScalarField) -> ScalarField {
                $tr::$m(self.clone(), o.clone())
            }
        }
        impl $tr<f64> for ScalarField {
            type Output = ScalarField;
            fn $m(self, o: f64) -> ScalarField {
                $tr::$m(self, ScalarField::constant(o))
            }
        }
        impl $tr<ScalarField> for f64 {
            type Output = ScalarField;
            fn $m(self, o: ScalarField) -> ScalarField {
                $tr::$m(ScalarField::constant(self), o)
            }
        }
    )*};
}

ref_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        -self.clone()
    }
}
