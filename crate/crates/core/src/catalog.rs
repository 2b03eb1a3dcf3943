//! Registry of closed-form solutions, each bound to the equation it solves.

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::equations::{residual_grid, Equation, GridOptions, LinearForm, PdeCoefficients, ResidualReport};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::ScalarField;
use crate::grid::GridSpec;

pub type Params = BTreeMap<String, f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pending,
    Verified,
    UnverifiedAsPrinted,
    ComplexValued,
}

impl Status {
    pub fn from_report(report: &ResidualReport, complex: bool) -> Self {
        match (report.pass, complex) {
            (true, true) => Status::ComplexValued,
            (true, false) => Status::Verified,
            (false, _) => Status::UnverifiedAsPrinted,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Status::Pending => "pending",
            Status::Verified => "verified",
            Status::UnverifiedAsPrinted => "unverified-as-printed",
            Status::ComplexValued => "complex-valued",
        }
    }
}

type Builder = fn(&Params) -> Result<(ScalarField, Equation)>;

/// A parameterized closed form and its target equation.
#[derive(Clone)]
pub struct SolutionRecord {
    pub id: &'static str,
    pub paper_eq: &'static str,
    pub params: Params,
    pub note: Option<&'static str>,
    pub status: Status,
    builder: Builder,
}

impl std::fmt::Debug for SolutionRecord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SolutionRecord")
            .field("id", &self.id)
            .field("paper_eq", &self.paper_eq)
            .field("params", &self.params)
            .field("status", &self.status)
            .finish()
    }
}

impl SolutionRecord {
    /// Defaults overlaid with `overrides`; unknown names are rejected.
    pub fn params_with(&self, overrides: &[(&str, f64)]) -> Result<Params> {
        let mut p = self.params.clone();
        for (k, v) in overrides {
            match p.get_mut(*k) {
                Some(slot) => *slot = *v,
                None => return Err(Error::UnknownId(format!("{}:{k}", self.id))),
            }
        }
        Ok(p)
    }

    pub fn build(&self) -> Result<ScalarField> {
        Ok((self.builder)(&self.params)?.0)
    }

    pub fn build_with(&self, params: &Params) -> Result<(ScalarField, Equation)> {
        (self.builder)(params)
    }

    pub fn target(&self) -> Result<Equation> {
        Ok((self.builder)(&self.params)?.1)
    }

    /// Serializable instance at the default parameters.
    pub fn entry(&self) -> Result<CatalogEntry> {
        let (expression, target) = (self.builder)(&self.params)?;
        Ok(CatalogEntry {
            id: self.id.to_string(),
            paper_eq: self.paper_eq.to_string(),
            params: self.params.clone(),
            expression,
            target,
        })
    }
}

/// A concrete field with its target, as stored in a catalog file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "EntryRepr", into = "EntryRepr")]
pub struct CatalogEntry {
    pub id: String,
    pub paper_eq: String,
    pub params: Params,
    pub expression: ScalarField,
    pub target: Equation,
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    id: String,
    paper_eq: String,
    params: Params,
    expression: String,
    target: Equation,
}

impl From<CatalogEntry> for EntryRepr {
    fn from(e: CatalogEntry) -> Self {
        EntryRepr {
            id: e.id,
            paper_eq: e.paper_eq,
            params: e.params,
            expression: e.expression.to_sexpr(),
            target: e.target,
        }
    }
}

impl TryFrom<EntryRepr> for CatalogEntry {
    type Error = Error;

    fn try_from(r: EntryRepr) -> Result<Self> {
        Ok(CatalogEntry {
            id: r.id,
            paper_eq: r.paper_eq,
            params: r.params,
            expression: ScalarField::from_sexpr(&r.expression)?,
            target: r.target,
        })
    }
}

impl CatalogEntry {
    /// Complex arithmetic is needed for the field or its target.
    pub fn is_complex(&self) -> bool {
        self.expression.has_complex_constants() || !self.target.is_real()
    }

    pub fn verify(&self, grid: &GridSpec, opts: GridOptions) -> Result<ResidualReport> {
        if self.is_complex() {
            residual_grid::<Complex64>(&self.target, &self.expression, &self.id, grid, opts)
        } else {
            residual_grid::<f64>(&self.target, &self.expression, &self.id, grid, opts)
        }
    }
}

/// Outcome of verifying one record.
#[derive(Clone, Debug)]
pub struct Verification {
    pub id: String,
    pub paper_eq: String,
    pub status: Status,
    pub report: ResidualReport,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    records: Vec<SolutionRecord>,
}

impl Catalog {
    pub fn builtin() -> Self {
        let mut records = builtin_records();
        records.sort_by_key(|r| r.id);
        Self { records }
    }

    pub fn list(&self) -> Vec<&'static str> {
        self.records.iter().map(|r| r.id).collect()
    }

    pub fn records(&self) -> &[SolutionRecord] {
        &self.records
    }

    pub fn get(&self, id: &str) -> Result<&SolutionRecord> {
        self.records.iter().find(|r| r.id == id).ok_or_else(|| Error::UnknownId(id.to_string()))
    }

    pub fn entries(&self) -> Result<Vec<CatalogEntry>> {
        self.records.iter().map(SolutionRecord::entry).collect()
    }

    pub fn dump_json(&self) -> Result<String> {
        serde_json::to_string_pretty(&self.entries()?).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load_json(src: &str) -> Result<Vec<CatalogEntry>> {
        serde_json::from_str(src).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Verifies the records named in `ids` (all when `None`), in id order,
    /// and re-statuses them from their reports.
    pub fn verify(&mut self, ids: Option<&[&str]>, grid: &GridSpec, tol: f64, exec: Exec) -> Result<Vec<Verification>> {
        grid.validate()?;
        let selected: Vec<usize> = match ids {
            None => (0..self.records.len()).collect(),
            Some(ids) => {
                let mut v = ids
                    .iter()
                    .map(|id| self.records.iter().position(|r| r.id == *id).ok_or_else(|| Error::UnknownId(id.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                v.sort_unstable();
                v.dedup();
                v
            }
        };
        let opts = GridOptions { tol, exec: Exec::Sequential, ..GridOptions::default() };
        let inner = if selected.len() == 1 { GridOptions { exec, ..opts } } else { opts };
        let results = exec.map_slice(&selected, |&i| -> Result<Verification> {
            let entry = self.records[i].entry()?;
            let report = entry.verify(grid, inner)?;
            Ok(Verification {
                status: Status::from_report(&report, entry.is_complex()),
                id: entry.id,
                paper_eq: entry.paper_eq,
                report,
            })
        });
        let results = results.into_iter().collect::<Result<Vec<_>>>()?;
        for (i, v) in selected.iter().zip(&results) {
            self.records[*i].status = v.status;
        }
        Ok(results)
    }

    pub fn verify_all(&mut self, grid: &GridSpec, exec: Exec) -> Result<Vec<Verification>> {
        self.verify(None, grid, crate::equations::DEFAULT_TOL, exec)
    }
}

/// Fixed-width reproduction table.
pub fn summary_table(rows: &[Verification]) -> String {
    let mut s = format!(
        "{:<25} {:<14} {:<24} {:>11} {:>11} {:>8}  {}\n",
        "id", "paper_eq", "equation", "max_abs", "max_scaled", "skipped", "status"
    );
    for v in rows {
        s.push_str(&format!(
            "{:<25} {:<14} {:<24} {:>11.3e} {:>11.3e} {:>8}  {}\n",
            v.id,
            v.paper_eq,
            v.report.equation,
            v.report.max_abs,
            v.report.max_scaled,
            v.report.skipped,
            v.status.label()
        ));
    }
    s
}

// Closed forms.

fn x() -> ScalarField {
    ScalarField::x()
}

fn t() -> ScalarField {
    ScalarField::t()
}

/// `M = −1/(1 + exp(m0 + ax + bt))`.
pub fn kink_m(a: f64, b: f64, m0: f64) -> ScalarField {
    -(1.0 + (m0 + a * x() + b * t()).exp()).recip()
}

/// `Q = (−1 + exp(2ax + q0))/(1 + exp(2ax + q0))`.
pub fn kink_q(a: f64, q0: f64) -> ScalarField {
    let e = (2.0 * a * x() + q0).exp();
    (e.clone() - 1.0) / (1.0 + e)
}

/// `M2 = 1/(1 + exp(m1 − ax + bt))`.
pub fn kink_m2(a: f64, b: f64, m1: f64) -> ScalarField {
    (1.0 + (m1 - a * x() + b * t()).exp()).recip()
}

/// `Q2 = (1 − exp(q1 − 2ax))/(1 + exp(q1 − 2ax))`.
pub fn kink_q2(a: f64, q1: f64) -> ScalarField {
    let e = (q1 - 2.0 * a * x()).exp();
    (1.0 - e.clone()) / (1.0 + e)
}

/// Phase of the first kink pair, `ln((1 + e^{m0+ax−3tφ3/2})/(1 + e^{q0+2ax}))`.
pub fn phase_kink_pair(a: f64, phi3: f64, m0: f64, q0: f64) -> ScalarField {
    ((1.0 + (m0 + a * x() - 1.5 * phi3 * t()).exp()) / (1.0 + (q0 + 2.0 * a * x()).exp())).ln()
}

/// Phase of the second kink pair, `ln((1 + e^{m1−ax−3tφ3/2})/(1 + e^{q1−2ax}))`.
pub fn phase_kink_pair2(a: f64, phi3: f64, m1: f64, q1: f64) -> ScalarField {
    ((1.0 + (m1 - a * x() - 1.5 * phi3 * t()).exp()) / (1.0 + (q1 - 2.0 * a * x()).exp())).ln()
}

pub fn u1(a: f64, phi3: f64, m0: f64, q0: f64) -> ScalarField {
    let e1 = (-q0 - 2.0 * a * x() + LN_2).exp();
    let e2 = (m0 - q0 - a * x() - 1.5 * phi3 * t()).exp();
    (1.0 - e1.clone()) / (1.0 + e1 + e2)
}

pub fn u2(a: f64, phi3: f64, m1: f64, q1: f64) -> ScalarField {
    let e1 = (-q1 + 2.0 * a * x() + LN_2).exp();
    let e2 = (m1 - q1 + a * x() - 1.5 * phi3 * t()).exp();
    (1.0 - e1.clone()) / (1.0 + e1 + e2)
}

pub fn u3(a: f64, phi3: f64, q0: f64, q1: f64, m0: f64, m1: f64) -> ScalarField {
    let l = ((2.0 + q1.exp()) / (2.0 + q0.exp())).ln();
    let k = (((m1 + q0).exp() + (m0 + q1).exp()) / (2.0 + q0.exp())).ln();
    let e1 = (q0 - q1 + 2.0 * a * x() + l).exp();
    let e2 = (-q1 + a * x() + k - 1.5 * phi3 * t()).exp();
    (e1.clone() - 1.0) / (1.0 + e1 + e2)
}

/// `(c1, c2)` of the translation-constant form of `u3`.
pub fn u3_constants(q0: f64, q1: f64, m0: f64, m1: f64) -> (f64, f64) {
    let d = (q0 + m1).exp() + (q1 + m0).exp();
    (q1.exp() * (2.0 + q0.exp()) / d, q0.exp() * (2.0 + q1.exp()) / d)
}

/// `(−c1e^{τ1} + c2e^{τ2})/(1 + c1e^{τ1} + c2e^{τ2})`, `τ1,2 = ∓ax + 3tφ3/2`.
pub fn family_c(a: f64, phi3: f64, c1: f64, c2: f64) -> ScalarField {
    let e1 = c1 * (-a * x() + 1.5 * phi3 * t()).exp();
    let e2 = c2 * (a * x() + 1.5 * phi3 * t()).exp();
    (e2.clone() - e1.clone()) / (1.0 + e1 + e2)
}

/// Two-parameter family with constants in the exponents, `e^{τi + Ci}`.
pub fn family(a: f64, phi3: f64, k1: f64, k2: f64) -> ScalarField {
    let e1 = (-a * x() + 1.5 * phi3 * t() + k1).exp();
    let e2 = (a * x() + 1.5 * phi3 * t() + k2).exp();
    (e2.clone() - e1.clone()) / (1.0 + e1 + e2)
}

/// The composite of two family members as printed, with the exponentials of
/// the constants summed.
pub fn family_diamond(a: f64, phi3: f64, c: (f64, f64), v: (f64, f64)) -> ScalarField {
    let s1 = c.0.exp() + v.0.exp();
    let s2 = c.1.exp() + v.1.exp();
    let e1 = (-a * x() + 1.5 * phi3 * t()).exp() * s1;
    let e2 = (a * x() + 1.5 * phi3 * t()).exp() * s2;
    (e2.clone() - e1.clone()) / (1.0 + e1 + e2)
}

pub fn q_2_55(a: f64, c1: f64) -> ScalarField {
    let e = c1 * (2.0 * a * x()).exp();
    (1.0 + e.clone()) / (1.0 - e)
}

pub fn u_2_55(a: f64, c1: f64) -> ScalarField {
    c1 + (-2.0 * a * x()).exp()
}

pub fn u_2_56(a: f64, phi3: f64, c1: f64) -> ScalarField {
    let e = c1 * (2.0 * a * x()).exp();
    (1.0 + e.clone()) / (e - 1.0 + (a * x() - 1.5 * phi3 * t()).exp())
}

/// `a1 = i·a·√2`.
pub fn a1_imag(a: f64) -> Complex64 {
    Complex64::new(0.0, a * SQRT_2)
}

fn exp_linear_complex(kx: Complex64, kt: Complex64) -> ScalarField {
    (ScalarField::complex(kx.re, kx.im) * x() + ScalarField::complex(kt.re, kt.im) * t()).exp()
}

pub fn u_2_57(a: f64, phi3: f64, c2: f64) -> ScalarField {
    let a1 = a1_imag(a);
    let kx = a + a1;
    let kt = (a - a1) * (a + a1) * phi3 / (2.0 * a * a);
    (1.0 + 2.0 * a * c2 * (-2.0 * a * x()).exp()) * exp_linear_complex(kx, kt)
}

pub fn u_2_58(a: f64, phi3: f64, c2: f64) -> ScalarField {
    let e = (2.0 * a * x()).exp();
    (2.0 * a * c2 + e.clone()) / (2.0 * a * c2 - e + (a * x() - 1.5 * phi3 * t()).exp())
}

pub fn u_2_59(a: f64, phi3: f64) -> ScalarField {
    let e = (2.0 * a * x()).exp();
    (1.0 - e.clone()) / (1.0 + e + (a * x() - 1.5 * phi3 * t()).exp())
}

pub fn u_2_60(a: f64, phi3: f64) -> ScalarField {
    let a1 = a1_imag(a);
    let kx = -a + a1;
    let kt = (a - a1) * (a + a1) * phi3 / (2.0 * a * a);
    ((2.0 * a * x()).exp() - 1.0) * exp_linear_complex(kx, kt)
}

/// `C2·tanh²((x/2)·√(3C2√2))/(3√2)`.
pub fn varcoef_phi1(c2: f64) -> ScalarField {
    let k = (3.0 * c2 * SQRT_2).sqrt() / 2.0;
    c2 * (k * x()).tanh().square() / (3.0 * SQRT_2)
}

/// `f1/(1 − f1)`, `f1 = exp(C2t/(2√2))·cosh^{1/3}(√(3C2)x/2^{3/4})`.
pub fn varcoef_u(c2: f64) -> ScalarField {
    let f1 = (c2 / (2.0 * SQRT_2) * t()).exp() * ((3.0 * c2).sqrt() / 2f64.powf(0.75) * x()).cosh().powf(1.0 / 3.0);
    f1.clone() / (1.0 - f1)
}

pub fn ex2_u(a1: f64, h1: f64) -> ScalarField {
    let e = (a1 * x()).exp();
    let e2 = (((-h1 * h1 - 3.0 * a1 * a1) * t() + 2.0 * (h1 + a1) * x()) / 4.0).exp();
    (1.0 - e.clone()) / (1.0 + e + e2)
}

pub fn ex3_u(h1: f64, phi3: f64) -> ScalarField {
    let e = ((h1 * t() + x()) * (phi3 / h1)).exp();
    (1.0 - e.clone()) / (1.0 - (x() * (phi3 / (2.0 * h1))).exp() + e)
}

pub fn ex4_u(a1: f64, phi3: f64) -> ScalarField {
    let e = (x() / a1).exp();
    (1.0 - e.clone()) / (1.0 + e + (x() / a1 - phi3 * t()).exp())
}

// Registry.

fn params(list: &[(&str, f64)]) -> Params {
    list.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn rec(id: &'static str, paper_eq: &'static str, p: &[(&str, f64)], builder: Builder) -> SolutionRecord {
    SolutionRecord { id, paper_eq, params: params(p), note: None, status: Status::Pending, builder }
}

fn fhns_target(p: &Params) -> Equation {
    Equation::Fhns { a: p["a"], phi3: p["phi3"] }
}

fn builtin_records() -> Vec<SolutionRecord> {
    let fh = [("a", 1.0), ("phi3", 1.0)];
    let with = |extra: &[(&'static str, f64)]| -> Vec<(&'static str, f64)> {
        fh.iter().copied().chain(extra.iter().copied()).collect()
    };
    let mut v = vec![
        rec("fhns_kink_M", "(2.35)", &with(&[("m0", 0.0), ("b_offset", 0.0)]), |p| {
            Ok((kink_m(p["a"], -1.5 * p["phi3"] + p["b_offset"], p["m0"]), fhns_target(p)))
        }),
        rec("fhns_kink_Q", "(2.35)", &with(&[("q0", 0.0)]), |p| Ok((kink_q(p["a"], p["q0"]), fhns_target(p)))),
        rec("fhns_u1", "(2.37)", &with(&[("m0", 0.0), ("q0", 0.0)]), |p| {
            Ok((u1(p["a"], p["phi3"], p["m0"], p["q0"]), fhns_target(p)))
        }),
        rec("fhns_M2", "(2.38)", &with(&[("m1", 0.0)]), |p| {
            Ok((kink_m2(p["a"], -1.5 * p["phi3"], p["m1"]), fhns_target(p)))
        }),
        rec("fhns_Q2", "(2.38)", &with(&[("q1", 0.0)]), |p| Ok((kink_q2(p["a"], p["q1"]), fhns_target(p)))),
        rec("fhns_u2", "(2.40)", &with(&[("m1", 0.0), ("q1", 0.0)]), |p| {
            Ok((u2(p["a"], p["phi3"], p["m1"], p["q1"]), fhns_target(p)))
        }),
        rec("fhns_u2_dressed", "(2.38)-(2.39)", &with(&[("m1", 0.0), ("q1", 0.0)]), |p| {
            let (a, phi3) = (p["a"], p["phi3"]);
            let m = kink_m2(a, -1.5 * phi3, p["m1"]);
            let q = kink_q2(a, p["q1"]);
            let h = phase_kink_pair2(a, phi3, p["m1"], p["q1"]);
            Ok((crate::dressing::dress(&m, &q, &h), fhns_target(p)))
        }),
        rec("fhns_u3", "(2.41)-(2.42)", &with(&[("q0", 0.0), ("q1", 0.0), ("m0", 0.0), ("m1", 0.0)]), |p| {
            Ok((u3(p["a"], p["phi3"], p["q0"], p["q1"], p["m0"], p["m1"]), fhns_target(p)))
        }),
        rec("fhns_two_param", "(2.43)", &with(&[("C1", 1.0), ("C2", 1.0)]), |p| {
            Ok((family(p["a"], p["phi3"], p["C1"], p["C2"]), fhns_target(p)))
        }),
        rec("fhns_diamond_out", "(2.44)", &with(&[("C1", 1.0), ("C2", 1.0), ("V1", 0.0), ("V2", 0.0)]), |p| {
            Ok((family_diamond(p["a"], p["phi3"], (p["C1"], p["C2"]), (p["V1"], p["V2"])), fhns_target(p)))
        }),
        rec("lin_pair_2_55", "(2.55)", &with(&[("C1", 1.0)]), |p| {
            let (a, phi3) = (p["a"], p["phi3"]);
            let form = LinearForm::Thm22 { a, a1: Complex64::new(-a, 0.0), phi3 };
            Ok((u_2_55(a, p["C1"]), Equation::Linear(form)))
        }),
        rec("lin_pair_2_55_as_printed", "(2.47),(2.55)", &with(&[("C1", 1.0)]), |p| {
            let (a, phi3) = (p["a"], p["phi3"]);
            let form = LinearForm::Thm22AsPrinted { a, a1: Complex64::new(-a, 0.0), phi3 };
            Ok((u_2_55(a, p["C1"]), Equation::Linear(form)))
        }),
        rec("lin_pair_2_55_Q", "(2.55)", &with(&[("C1", 1.0)]), |p| Ok((q_2_55(p["a"], p["C1"]), fhns_target(p)))),
        rec("fhns_2_56", "(2.56)", &with(&[("C1", 1.0)]), |p| {
            Ok((u_2_56(p["a"], p["phi3"], p["C1"]), fhns_target(p)))
        }),
        rec("lin_2_57", "(2.57)", &with(&[("C2", 1.0)]), |p| {
            let (a, phi3) = (p["a"], p["phi3"]);
            Ok((u_2_57(a, phi3, p["C2"]), Equation::Linear(LinearForm::Thm22 { a, a1: a1_imag(a), phi3 })))
        }),
        rec("fhns_2_58", "(2.58)", &with(&[("C2", 1.0)]), |p| {
            Ok((u_2_58(p["a"], p["phi3"], p["C2"]), fhns_target(p)))
        }),
        rec("fhns_2_59", "(2.59)", &fh, |p| Ok((u_2_59(p["a"], p["phi3"]), fhns_target(p)))),
        rec("lin_2_60", "(2.60)", &fh, |p| {
            let (a, phi3) = (p["a"], p["phi3"]);
            Ok((u_2_60(a, phi3), Equation::Linear(LinearForm::Thm22 { a, a1: a1_imag(a), phi3 })))
        }),
        rec("varcoef_phi1", "(2.64)", &[("C2", 1.0)], |p| Ok((varcoef_phi1(p["C2"]), Equation::Phi1Compat))),
        rec("varcoef_u", "(2.65)-(2.66)", &[("C2", 1.0)], |p| {
            let phi1 = varcoef_phi1(p["C2"]);
            let eq = Equation::FhnsVar { k0: ScalarField::one(), phi1: phi1.clone(), phi3: phi1 };
            Ok((varcoef_u(p["C2"]), eq))
        }),
        rec("ex2_u", "(2.72)-(2.73)", &[("a1", 1.0), ("h1", 1.0)], |p| {
            Ok((ex2_u(p["a1"], p["h1"]), Equation::General(PdeCoefficients::example2(p["a1"], p["h1"]))))
        }),
        rec("ex3_u", "(2.75)-(2.76)", &[("h1", 1.0), ("phi3", -1.0)], |p| {
            Ok((ex3_u(p["h1"], p["phi3"]), Equation::General(PdeCoefficients::example3(p["h1"], p["phi3"]))))
        }),
        rec("ex4_u", "(2.77)-(2.78)", &[("a1", 1.0), ("phi3", -1.0)], |p| {
            Ok((ex4_u(p["a1"], p["phi3"]), Equation::General(PdeCoefficients::example4(p["a1"], p["phi3"]))))
        }),
    ];
    let notes: [(&str, &str); 6] = [
        ("fhns_u2", "printed form equals minus the dressed field of the M2, Q2 pair; see fhns_u2_dressed"),
        ("lin_pair_2_55", "checked against diffusion phi3/(2a^2); the printed coefficient phi3/a^2 is lin_pair_2_55_as_printed"),
        ("lin_pair_2_55_as_printed", "linear equation with diffusion phi3/a^2 exactly as printed"),
        ("varcoef_phi1", "tanh argument read left to right as (x/2)*sqrt(3*C2*sqrt(2))"),
        ("ex3_u", "phi3 = -1 keeps the equation parabolic; denominator zeros appear from t = ln 4"),
        ("ex4_u", "phi3 = -1: range [-0.5, 1] at t = 0, relaxing towards 0 at fixed x"),
    ];
    for (id, note) in notes {
        if let Some(r) = v.iter_mut().find(|r| r.id == id) {
            r.note = Some(note);
        }
    }
    v
}

/// Named coefficient presets without a printed solution.
pub fn presets() -> Vec<(&'static str, &'static str, Equation)> {
    vec![
        ("degenerate", "(2.74)", Equation::Degenerate { h1: 1.0 }),
        ("fkpp_modified", "(2.79)-(2.80)", Equation::General(PdeCoefficients::fkpp_modified(1.0, 1.0, 1.0, 1.0))),
        ("quartic_roots", "(1.1)", Equation::General(PdeCoefficients::quartic_roots(0.25, 0.5))),
    ]
}
