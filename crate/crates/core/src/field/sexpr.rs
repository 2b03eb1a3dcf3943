//! S-expression text form. Floats are written with `{:?}`, which round-trips
//! bit-exactly.

use std::fmt::Write;
use std::sync::Arc;

use num_complex::Complex64;

use super::{Node, ScalarField, Table};
use crate::error::{Error, Result};
use crate::ode::{LinearOde2, OdeSolution};

impl ScalarField {
    pub fn to_sexpr(&self) -> String {
        let mut s = String::new();
        write_node(self, &mut s);
        s
    }

    pub fn from_sexpr(src: &str) -> Result<ScalarField> {
        let tokens = tokenize(src);
        let mut pos = 0;
        let f = parse(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::Parse(format!("trailing input at token {pos}")));
        }
        Ok(f)
    }
}

fn write_node(f: &ScalarField, out: &mut String) {
    let bin = |op: &str, a: &ScalarField, b: &ScalarField, out: &mut String| {
        write!(out, "({op} ").unwrap();
        write_node(a, out);
        out.push(' ');
        write_node(b, out);
        out.push(')');
    };
    let un = |op: &str, a: &ScalarField, out: &mut String| {
        write!(out, "({op} ").unwrap();
        write_node(a, out);
        out.push(')');
    };
    match f.node() {
        Node::Const(c) if c.im == 0.0 && !c.im.is_sign_negative() => write!(out, "{:?}", c.re).unwrap(),
        Node::Const(c) => write!(out, "(c {:?} {:?})", c.re, c.im).unwrap(),
        Node::X => out.push('x'),
        Node::T => out.push('t'),
        Node::Add(a, b) => bin("+", a, b, out),
        Node::Sub(a, b) => bin("-", a, b, out),
        Node::Mul(a, b) => bin("*", a, b, out),
        Node::Div(a, b) => bin("/", a, b, out),
        Node::Neg(a) => un("neg", a, out),
        Node::Exp(a) => un("exp", a, out),
        Node::Ln(a) => un("ln", a, out),
        Node::Tanh(a) => un("tanh", a, out),
        Node::Cosh(a) => un("cosh", a, out),
        Node::Sinh(a) => un("sinh", a, out),
        Node::Sin(a) => un("sin", a, out),
        Node::Cos(a) => un("cos", a, out),
        Node::Sqrt(a) => un("sqrt", a, out),
        Node::Pow(a, p) => {
            out.push_str("(pow ");
            write_node(a, out);
            write!(out, " {p:?})").unwrap();
        }
        Node::Quad { integrand, x_ref } => {
            write!(out, "(quad {x_ref:?} ").unwrap();
            write_node(integrand, out);
            out.push(')');
        }
        Node::Tab(tb) => {
            write!(out, "(tab {:?} {:?} {} {:?} {:?} {}", tb.x0, tb.hx, tb.nx, tb.t0, tb.ht, tb.nt).unwrap();
            for v in &tb.values {
                write!(out, " {v:?}").unwrap();
            }
            out.push(')');
        }
        Node::Ode { sol, order, arg } => {
            let o = &sol.ode;
            write!(
                out,
                "(ode {order} {:?} {:?} {:?} {:?} {:?} {:?} {:?} {:?} {:?} {:?} {:?} {:?} ",
                o.a[0], o.a[1], o.b[0], o.b[1], o.c[0], o.c[1], sol.z0, sol.v0, sol.dv0, sol.zlo, sol.zhi, sol.tol
            )
            .unwrap();
            write_node(arg, out);
            out.push(')');
        }
    }
}

fn tokenize(src: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in src.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn number(tokens: &[String], pos: &mut usize) -> Result<f64> {
    let tok = tokens.get(*pos).ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
    *pos += 1;
    tok.parse::<f64>().map_err(|_| Error::Parse(format!("expected number, got `{tok}`")))
}

fn count(tokens: &[String], pos: &mut usize) -> Result<usize> {
    let v = number(tokens, pos)?;
    if v < 0.0 || v.fract() != 0.0 {
        return Err(Error::Parse(format!("expected count, got {v}")));
    }
    Ok(v as usize)
}

fn parse(tokens: &[String], pos: &mut usize) -> Result<ScalarField> {
    let tok = tokens.get(*pos).ok_or_else(|| Error::Parse("unexpected end of input".into()))?.clone();
    *pos += 1;
    if tok == ")" {
        return Err(Error::Parse("unexpected `)`".into()));
    }
    if tok != "(" {
        return match tok.as_str() {
            "x" => Ok(ScalarField::new(Node::X)),
            "t" => Ok(ScalarField::new(Node::T)),
            _ => tok
                .parse::<f64>()
                .map(|v| ScalarField::new(Node::Const(Complex64::new(v, 0.0))))
                .map_err(|_| Error::Parse(format!("unknown atom `{tok}`"))),
        };
    }
    let op = tokens.get(*pos).ok_or_else(|| Error::Parse("empty list".into()))?.clone();
    *pos += 1;
    let sub = |pos: &mut usize| parse(tokens, pos);
    let node = match op.as_str() {
        "c" => Node::Const(Complex64::new(number(tokens, pos)?, number(tokens, pos)?)),
        "+" => Node::Add(sub(pos)?, sub(pos)?),
        "-" => Node::Sub(sub(pos)?, sub(pos)?),
        "*" => Node::Mul(sub(pos)?, sub(pos)?),
        "/" => Node::Div(sub(pos)?, sub(pos)?),
        "neg" => Node::Neg(sub(pos)?),
        "exp" => Node::Exp(sub(pos)?),
        "ln" => Node::Ln(sub(pos)?),
        "tanh" => Node::Tanh(sub(pos)?),
        "cosh" => Node::Cosh(sub(pos)?),
        "sinh" => Node::Sinh(sub(pos)?),
        "sin" => Node::Sin(sub(pos)?),
        "cos" => Node::Cos(sub(pos)?),
        "sqrt" => Node::Sqrt(sub(pos)?),
        "pow" => {
            let a = sub(pos)?;
            Node::Pow(a, number(tokens, pos)?)
        }
        "quad" => {
            let x_ref = number(tokens, pos)?;
            Node::Quad { x_ref, integrand: sub(pos)? }
        }
        "tab" => {
            let x0 = number(tokens, pos)?;
            let hx = number(tokens, pos)?;
            let nx = count(tokens, pos)?;
            let t0 = number(tokens, pos)?;
            let ht = number(tokens, pos)?;
            let nt = count(tokens, pos)?;
            let values = (0..nx * nt).map(|_| number(tokens, pos)).collect::<Result<Vec<_>>>()?;
            Node::Tab(Arc::new(Table::new(x0, hx, nx, t0, ht, nt, values)?))
        }
        "ode" => {
            let order = count(tokens, pos)? as u32;
            let mut p = [0.0; 12];
            for v in p.iter_mut() {
                *v = number(tokens, pos)?;
            }
            let ode = LinearOde2 { a: [p[0], p[1]], b: [p[2], p[3]], c: [p[4], p[5]] };
            let sol = OdeSolution::new(ode, p[6], p[7], p[8], p[9], p[10], p[11])?;
            Node::Ode { sol: Arc::new(sol), order, arg: sub(pos)? }
        }
        other => return Err(Error::Parse(format!("unknown operator `{other}`"))),
    };
    match tokens.get(*pos).map(String::as_str) {
        Some(")") => {
            *pos += 1;
            Ok(ScalarField::new(node))
        }
        _ => Err(Error::Parse(format!("expected `)` after `{op}`"))),
    }
}
