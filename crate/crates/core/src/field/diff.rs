use super::{Node, ScalarField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    T,
}

impl ScalarField {
    /// Symbolic partial derivative.
    pub fn diff(&self, v: Var) -> ScalarField {
        let d = |f: &ScalarField| f.diff(v);
        match self.node() {
            Node::Const(_) => ScalarField::zero(),
            Node::X => ScalarField::constant(if v == Var::X { 1.0 } else { 0.0 }),
            Node::T => ScalarField::constant(if v == Var::T { 1.0 } else { 0.0 }),
            Node::Add(a, b) => d(a) + d(b),
            Node::Sub(a, b) => d(a) - d(b),
            Node::Mul(a, b) => d(a) * b.clone() + a.clone() * d(b),
            Node::Div(a, b) => {
                let da = d(a);
                let db = d(b);
                if db.is_zero() {
                    da / b.clone()
                } else {
                    (da * b.clone() - a.clone() * db) / b.square()
                }
            }
            Node::Neg(a) => -d(a),
            Node::Exp(a) => d(a) * self.clone(),
            Node::Ln(a) => d(a) / a.clone(),
            Node::Tanh(a) => d(a) * (1.0 - self.square()),
            Node::Cosh(a) => d(a) * a.sinh(),
            Node::Sinh(a) => d(a) * a.cosh(),
            Node::Sin(a) => d(a) * a.cos(),
            Node::Cos(a) => -(d(a) * a.sin()),
            Node::Sqrt(a) => d(a) / (2.0 * self.clone()),
            Node::Pow(a, p) => d(a) * (*p * a.powf(p - 1.0)),
            Node::Quad { integrand, x_ref } => match v {
                Var::X => integrand.clone(),
                Var::T => integrand.diff(Var::T).integrate_x(*x_ref),
            },
            Node::Tab(table) => ScalarField::tabulated(table.differentiate(v)),
            Node::Ode { sol, order, arg } => d(arg) * ScalarField::ode(sol.clone(), order + 1, arg.clone()),
        }
    }

    pub fn dx(&self) -> ScalarField {
        self.diff(Var::X)
    }

    pub fn dt(&self) -> ScalarField {
        self.diff(Var::T)
    }
}
