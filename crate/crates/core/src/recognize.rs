//! Pattern recognition of exponential sums and log-derivative quotients,
//! used to emit closed-form x-antiderivatives instead of quadrature nodes.

use num_complex::Complex64;

use crate::field::{Node, ScalarField};

const C0: Complex64 = Complex64::new(0.0, 0.0);

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-13 * (1.0 + a.norm().max(b.norm()))
}

/// `c + kx·x + kt·t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Affine {
    pub c: Complex64,
    pub kx: Complex64,
    pub kt: Complex64,
}

impl Affine {
    fn scale(self, s: Complex64) -> Self {
        Affine { c: self.c * s, kx: self.kx * s, kt: self.kt * s }
    }
}

pub fn affine(f: &ScalarField) -> Option<Affine> {
    let one = Complex64::new(1.0, 0.0);
    Some(match f.node() {
        Node::Const(c) => Affine { c: *c, kx: C0, kt: C0 },
        Node::X => Affine { c: C0, kx: one, kt: C0 },
        Node::T => Affine { c: C0, kx: C0, kt: one },
        Node::Add(a, b) => {
            let (a, b) = (affine(a)?, affine(b)?);
            Affine { c: a.c + b.c, kx: a.kx + b.kx, kt: a.kt + b.kt }
        }
        Node::Sub(a, b) => {
            let (a, b) = (affine(a)?, affine(b)?);
            Affine { c: a.c - b.c, kx: a.kx - b.kx, kt: a.kt - b.kt }
        }
        Node::Neg(a) => affine(a)?.scale(-one),
        Node::Mul(a, b) => match (a.as_const(), b.as_const()) {
            (Some(s), _) => affine(b)?.scale(s),
            (_, Some(s)) => affine(a)?.scale(s),
            _ => return None,
        },
        Node::Div(a, b) => affine(a)?.scale(one / b.as_const()?),
        _ => return None,
    })
}

/// `coef · exp(kx·x + kt·t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpTerm {
    pub coef: Complex64,
    pub kx: Complex64,
    pub kt: Complex64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExpSum(pub Vec<ExpTerm>);

impl ExpSum {
    fn constant(c: Complex64) -> Self {
        ExpSum(vec![ExpTerm { coef: c, kx: C0, kt: C0 }])
    }

    fn normalize(mut self) -> Self {
        let mut out: Vec<ExpTerm> = Vec::new();
        for term in self.0.drain(..) {
            match out.iter_mut().find(|o| close(o.kx, term.kx) && close(o.kt, term.kt)) {
                Some(o) => o.coef += term.coef,
                None => out.push(term),
            }
        }
        out.retain(|t| t.coef.norm() > 0.0);
        ExpSum(out)
    }

    fn add(mut self, o: ExpSum) -> Self {
        self.0.extend(o.0);
        self.normalize()
    }

    fn scale(self, s: Complex64) -> Self {
        ExpSum(self.0.into_iter().map(|t| ExpTerm { coef: t.coef * s, ..t }).collect())
    }

    fn mul(&self, o: &ExpSum) -> Self {
        let mut v = Vec::new();
        for a in &self.0 {
            for b in &o.0 {
                v.push(ExpTerm { coef: a.coef * b.coef, kx: a.kx + b.kx, kt: a.kt + b.kt });
            }
        }
        ExpSum(v).normalize()
    }

    fn term_field(coef: Complex64, kx: Complex64, kt: Complex64) -> ScalarField {
        let c = ScalarField::new(Node::Const(coef));
        if kx == C0 && kt == C0 {
            return c;
        }
        let arg = ScalarField::new(Node::Const(kx)) * ScalarField::x() + ScalarField::new(Node::Const(kt)) * ScalarField::t();
        c * arg.exp()
    }

    pub fn to_field(&self) -> ScalarField {
        self.0
            .iter()
            .map(|t| Self::term_field(t.coef, t.kx, t.kt))
            .fold(ScalarField::zero(), |acc, f| acc + f)
    }

    /// An x-antiderivative; terms with `kx = 0` integrate to `x · term`.
    pub fn antiderivative_x(&self) -> ScalarField {
        self.0
            .iter()
            .map(|t| {
                if t.kx == C0 {
                    ScalarField::x() * Self::term_field(t.coef, C0, t.kt)
                } else {
                    Self::term_field(t.coef / t.kx, t.kx, t.kt)
                }
            })
            .fold(ScalarField::zero(), |acc, f| acc + f)
    }
}

/// Recognizes `f` as a finite sum of exponentials of affine arguments.
pub fn exp_sum(f: &ScalarField) -> Option<ExpSum> {
    let one = Complex64::new(1.0, 0.0);
    Some(match f.node() {
        Node::Const(c) => ExpSum::constant(*c),
        Node::Exp(a) => {
            let l = affine(a)?;
            ExpSum(vec![ExpTerm { coef: l.c.exp(), kx: l.kx, kt: l.kt }])
        }
        Node::Cosh(a) | Node::Sinh(a) => {
            let l = affine(a)?;
            let s = if matches!(f.node(), Node::Cosh(_)) { 0.5 } else { -0.5 };
            ExpSum(vec![
                ExpTerm { coef: 0.5 * l.c.exp(), kx: l.kx, kt: l.kt },
                ExpTerm { coef: s * (-l.c).exp(), kx: -l.kx, kt: -l.kt },
            ])
        }
        Node::Add(a, b) => exp_sum(a)?.add(exp_sum(b)?),
        Node::Sub(a, b) => exp_sum(a)?.add(exp_sum(b)?.scale(-one)),
        Node::Neg(a) => exp_sum(a)?.scale(-one),
        Node::Mul(a, b) => exp_sum(a)?.mul(&exp_sum(b)?),
        Node::Div(a, b) => exp_sum(a)?.scale(one / b.as_const()?),
        Node::Pow(a, p) if p.fract() == 0.0 && (0.0..=8.0).contains(p) => {
            let base = exp_sum(a)?;
            let mut acc = ExpSum::constant(one);
            for _ in 0..(*p as usize) {
                acc = acc.mul(&base);
            }
            acc
        }
        _ => return None,
    })
}

/// Recognizes `f = N/D` with `N`, `D` exponential sums.
pub fn exp_quotient(f: &ScalarField) -> Option<(ExpSum, ExpSum)> {
    let one = Complex64::new(1.0, 0.0);
    match f.node() {
        Node::Div(a, b) => {
            let d = exp_sum(b)?;
            // A nested quotient in the numerator is not handled.
            let n = exp_sum(a)?;
            Some((n, d))
        }
        Node::Neg(a) => exp_quotient(a).map(|(n, d)| (n.scale(-one), d)),
        Node::Mul(a, b) => match (a.as_const(), b.as_const()) {
            (Some(s), _) => exp_quotient(b).map(|(n, d)| (n.scale(s), d)),
            (_, Some(s)) => exp_quotient(a).map(|(n, d)| (n.scale(s), d)),
            _ => None,
        },
        Node::Tanh(a) => {
            let l = affine(a)?;
            let e = ExpTerm { coef: l.c.exp(), kx: l.kx, kt: l.kt };
            let m = ExpTerm { coef: (-l.c).exp(), kx: -l.kx, kt: -l.kt };
            Some((ExpSum(vec![e, ExpTerm { coef: -m.coef, ..m }]), ExpSum(vec![e, m])))
        }
        _ => exp_sum(f).map(|s| (s, ExpSum::constant(one))),
    }
}

/// For `N/D` with `N = λ D_x + μ D` termwise, returns `λ ln D + μ x`.
/// When every term of `D` shares the same `kx`, `N/D` does not depend on
/// `x` and the antiderivative is `x · N/D`.
pub fn log_derivative_antiderivative(n: &ExpSum, d: &ExpSum) -> Option<ScalarField> {
    if d.0.is_empty() {
        return None;
    }
    // Every numerator exponent must occur in the denominator.
    let mut pairs: Vec<(Complex64, Complex64, Complex64)> = Vec::new(); // (kx, n_i, d_i)
    for dt in &d.0 {
        let nc = n
            .0
            .iter()
            .find(|nt| close(nt.kx, dt.kx) && close(nt.kt, dt.kt))
            .map(|nt| nt.coef)
            .unwrap_or(C0);
        pairs.push((dt.kx, nc, dt.coef));
    }
    for nt in &n.0 {
        if !d.0.iter().any(|dt| close(nt.kx, dt.kx) && close(nt.kt, dt.kt)) {
            return None;
        }
    }
    let all_same_kx = pairs.iter().all(|p| close(p.0, pairs[0].0));
    if all_same_kx {
        // Ratio r_i = n_i/d_i must be common, else x-independence fails.
        let r = pairs[0].1 / pairs[0].2;
        if !pairs.iter().all(|p| close(p.1 / p.2, r)) {
            return None;
        }
        let f = n.to_field() / d.to_field();
        return Some(ScalarField::x() * f);
    }
    // Solve n_i/d_i = λ kx_i + μ from two terms with distinct kx.
    let (i, j) = {
        let j = pairs.iter().position(|p| !close(p.0, pairs[0].0))?;
        (0, j)
    };
    let ri = pairs[i].1 / pairs[i].2;
    let rj = pairs[j].1 / pairs[j].2;
    let lambda = (ri - rj) / (pairs[i].0 - pairs[j].0);
    let mu = ri - lambda * pairs[i].0;
    for p in &pairs {
        if !close(p.1 / p.2, lambda * p.0 + mu) {
            return None;
        }
    }
    let lam = ScalarField::new(Node::Const(lambda));
    let muf = ScalarField::new(Node::Const(mu));
    // ln of the denominator scaled by the sign of its leading real coefficient
    // keeps real-mode evaluation on the principal branch where D < 0.
    let mut dfield = d.to_field();
    let lead = d.0.iter().find(|t| t.kx == C0 && t.kt == C0).or_else(|| d.0.first())?;
    if lead.coef.im == 0.0 && lead.coef.re < 0.0 {
        dfield = -dfield;
    }
    Some(lam * dfield.ln() + muf * ScalarField::x())
}

/// Closed-form x-antiderivative of sums, differences and constant multiples
/// of exponential sums and log-derivative quotients.
pub fn antiderivative_x(f: &ScalarField) -> Option<ScalarField> {
    match f.node() {
        Node::Add(a, b) => Some(antiderivative_x(a)? + antiderivative_x(b)?),
        Node::Sub(a, b) => Some(antiderivative_x(a)? - antiderivative_x(b)?),
        Node::Neg(a) => Some(-antiderivative_x(a)?),
        Node::Mul(a, b) if a.as_const().is_some() => Some(a.clone() * antiderivative_x(b)?),
        Node::Mul(a, b) if b.as_const().is_some() => Some(antiderivative_x(a)? * b.clone()),
        _ => {
            if let Some(s) = exp_sum(f) {
                return Some(s.antiderivative_x());
            }
            let (n, d) = exp_quotient(f)?;
            log_derivative_antiderivative(&n, &d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(f: &ScalarField, big_f: &ScalarField) {
        for &(x, t) in &[(0.3, 0.2), (-1.4, 1.1), (2.2, 0.0)] {
            let j = big_f.eval_jet::<f64>(x, t).unwrap();
            let v = f.eval_real(x, t).unwrap();
            assert!((j.dx - v).abs() < 1e-12 * (1.0 + v.abs()), "{x} {t}: {} vs {v}", j.dx);
        }
    }

    #[test]
    fn kink_and_tanh() {
        let x = ScalarField::x();
        let t = ScalarField::t();
        let kink = -(1.0 + (0.4 + 1.3 * x.clone() - 1.2 * t.clone()).exp()).recip();
        let q = (-1.0 + (2.6 * x.clone() - 0.3).exp()) / (1.0 + (2.6 * x.clone() - 0.3).exp());
        let g = kink.clone() - q.clone();
        check(&g, &antiderivative_x(&g).unwrap());
        let th = (0.7 * x.clone() + t.clone()).tanh();
        check(&th, &antiderivative_x(&th).unwrap());
    }

    #[test]
    fn three_exponential_front() {
        let x = ScalarField::x();
        let t = ScalarField::t();
        let e1 = (-1.3 * x.clone() + 1.2 * t.clone() + 0.2).exp();
        let e2 = (1.3 * x.clone() + 1.2 * t.clone() - 0.5).exp();
        let u = (e2.clone() - e1.clone()) / (1.0 + e1 + e2);
        check(&u, &antiderivative_x(&u).unwrap());
    }

    #[test]
    fn exp_sum_products() {
        let x = ScalarField::x();
        let u = (0.7 + (-2.0 * x.clone()).exp()) * (1.0 * x.clone()).exp();
        check(&u, &antiderivative_x(&u).unwrap());
    }

    #[test]
    fn unrecognized_returns_none() {
        let u = ScalarField::x().sin() / (1.0 + ScalarField::x().square());
        assert!(antiderivative_x(&u).is_none());
    }
}
