//! First-mode dressing: the phase `H` built from a pair of solutions, the
//! dressed field `(Q + M e^H)/(1 + e^H)`, its compatibility checks and the
//! composition law of the two-parameter FhNS family.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::{self, CatalogEntry, Params};
use crate::equations::{
    coef, coef_jet, residual_grid, residual_grid_with, Equation, GridOptions, PdeCoefficients, Residual,
    ResidualReport,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::ScalarField;
use crate::grid::GridSpec;
use crate::jet::Jet2;
use crate::recognize;
use crate::scalar::Scalar;

/// Sign in front of `√(h2² + 8k0φ3)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    #[default]
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            _ => Err(Error::Parse(format!("branch must be plus or minus, got `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DressingConfig {
    pub branch: Branch,
    /// `C0(t)`; only its `t`-dependence matters to the checks.
    pub c0: ScalarField,
    /// Base point of x-antiderivatives. `None` picks a closed form when one
    /// is recognized, else the end where `M − Q` decays.
    pub x_ref: Option<f64>,
    /// Allow closed-form antiderivatives.
    pub closed_form: bool,
    /// Phase used by the checks when it is not given by formula (`b1 ≠ 0`).
    pub phase: Option<ScalarField>,
}

impl Default for DressingConfig {
    fn default() -> Self {
        Self { branch: Branch::Minus, c0: ScalarField::zero(), x_ref: None, closed_form: true, phase: None }
    }
}

impl DressingConfig {
    pub fn with_branch(mut self, b: Branch) -> Self {
        self.branch = b;
        self
    }

    pub fn with_c0(mut self, c0: impl Into<ScalarField>) -> Self {
        self.c0 = c0.into();
        self
    }
}

/// An x-antiderivative together with its `t`-derivative.
#[derive(Clone, Debug)]
pub struct Antiderivative {
    pub f: ScalarField,
    pub f_t: ScalarField,
    /// Base point of the quadrature, `None` for a closed form.
    pub x_ref: Option<f64>,
}

/// Chooses the end where `g` vanishes, probing at `x = ±40`.
pub fn decaying_end(g: &ScalarField) -> f64 {
    let probe = |x: f64| -> f64 {
        [0.0, 1.0]
            .iter()
            .map(|&t| g.eval_complex(x, t).map(|v| v.norm()).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    };
    let (l, r) = (probe(-40.0), probe(40.0));
    if l.min(r) > 1e-10 {
        0.0
    } else if l <= r {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    }
}

pub fn antiderivative(g: &ScalarField, cfg: &DressingConfig) -> Antiderivative {
    if g.is_zero() {
        return Antiderivative { f: ScalarField::zero(), f_t: ScalarField::zero(), x_ref: None };
    }
    if cfg.closed_form && cfg.x_ref.is_none() {
        if let Some(f) = recognize::antiderivative_x(g) {
            let f_t = f.dt();
            return Antiderivative { f, f_t, x_ref: None };
        }
    }
    let x_ref = cfg.x_ref.unwrap_or_else(|| decaying_end(g));
    Antiderivative { f: g.integrate_x(x_ref), f_t: g.dt().integrate_x(x_ref), x_ref: Some(x_ref) }
}

/// `(−h2 ± √(h2² + 8k0φ3))/(4k0)` as a field; errors on a negative constant
/// discriminant.
pub fn phase_slope(c: &PdeCoefficients, branch: Branch) -> Result<ScalarField> {
    let s = branch.sign();
    match (c.constant("h2"), c.constant("k0"), c.constant("phi3")) {
        (Some(h2), Some(k0), Some(p3)) => {
            if k0 == 0.0 {
                return Err(Error::PreconditionFailure("k0 must be nonzero".into()));
            }
            let disc = h2 * h2 + 8.0 * k0 * p3;
            if disc < 0.0 {
                return Err(Error::NegativeDiscriminant(disc));
            }
            Ok(ScalarField::constant((-h2 + s * disc.sqrt()) / (4.0 * k0)))
        }
        _ => {
            let disc = c.h2.square() + 8.0 * c.k0.clone() * c.phi[2].clone();
            Ok((-c.h2.clone() + s * disc.sqrt()) / (4.0 * c.k0.clone()))
        }
    }
}

fn require_b1_zero(c: &PdeCoefficients) -> Result<()> {
    if !c.b1.is_zero() {
        return Err(Error::PreconditionFailure("the explicit phase requires b1 = 0".into()));
    }
    Ok(())
}

/// `H = C0(t) − ∫ (M − Q)(−h2 ± √(h2² + 8k0φ3))/(4k0) dx`.
pub fn compute_h(m: &ScalarField, q: &ScalarField, c: &PdeCoefficients, cfg: &DressingConfig) -> Result<ScalarField> {
    require_b1_zero(c)?;
    let slope = phase_slope(c, cfg.branch)?;
    if same_field(m, q) {
        return Ok(cfg.c0.clone());
    }
    Ok(match slope.as_const() {
        Some(_) => cfg.c0.clone() - slope * antiderivative(&(m.clone() - q.clone()), cfg).f,
        None => cfg.c0.clone() - antiderivative(&((m.clone() - q.clone()) * slope), cfg).f,
    })
}

fn same_field(a: &ScalarField, b: &ScalarField) -> bool {
    a.ptr_id() == b.ptr_id() || a.to_sexpr() == b.to_sexpr()
}

/// `(Q + M e^H)/(1 + e^H)`.
pub fn dress(m: &ScalarField, q: &ScalarField, h: &ScalarField) -> ScalarField {
    if same_field(m, q) {
        return q.clone();
    }
    let e = h.exp();
    (q.clone() + m.clone() * e.clone()) / (1.0 + e)
}

/// First-mode ansatz with an explicit amplitude,
/// `(e^H M A + Q)/(1 + A e^H)`; equals `dress(M, Q, H + ln A)`.
pub fn dress_with_amplitude(m: &ScalarField, q: &ScalarField, a: &ScalarField, h: &ScalarField) -> ScalarField {
    let e = h.exp();
    (e.clone() * m.clone() * a.clone() + q.clone()) / (1.0 + a.clone() * e)
}

struct PairJets<S> {
    m: Jet2<S>,
    q: Jet2<S>,
}

fn pair_jets<S: Scalar>(
    m: &ScalarField,
    q: &ScalarField,
    x: f64,
    t: f64,
    dens: &mut Vec<Complex64>,
) -> Result<PairJets<S>> {
    Ok(PairJets { m: m.eval_jet_recording::<S>(x, t, dens)?, q: q.eval_jet_recording::<S>(x, t, dens)? })
}

/// Pointwise residual of the first-mode compatibility relation (constant
/// coefficients, `b1 = 0`), with `C0'` given.
fn compat_terms<S: Scalar>(
    p: &PairJets<S>,
    int_dt: S,
    k: &ConstCoefs,
    mroot: f64,
    c0p: S,
) -> Residual<S> {
    let f = S::from_f64;
    let (m, q) = (&p.m, &p.q);
    Residual::from_terms(&[
        int_dt * f(4.0 * (k.h2 - mroot)),
        -f(2.0) * (m.value * m.value - q.value * q.value) * f(k.h2 * k.h2 + 12.0 * k.k0 * k.phi3 - k.h2 * mroot),
        -f(4.0) * (m.value - q.value) * f(k.h1 * k.h2 + 4.0 * k.k0 * k.phi2 - k.h1 * mroot),
        f(16.0 * k.k0) * c0p,
        f(4.0 * k.k0 * (k.h2 + 3.0 * mroot)) * (m.dx - q.dx),
    ])
}

#[derive(Clone, Copy, Debug)]
struct ConstCoefs {
    h1: f64,
    h2: f64,
    k0: f64,
    phi2: f64,
    phi3: f64,
}

impl ConstCoefs {
    fn from(c: &PdeCoefficients) -> Option<Self> {
        Some(Self {
            h1: c.constant("h1")?,
            h2: c.constant("h2")?,
            k0: c.constant("k0")?,
            phi2: c.constant("phi2")?,
            phi3: c.constant("phi3")?,
        })
    }

    fn mroot(&self, branch: Branch) -> Result<f64> {
        let disc = self.h2 * self.h2 + 8.0 * self.k0 * self.phi3;
        if disc < 0.0 {
            return Err(Error::NegativeDiscriminant(disc));
        }
        Ok(branch.sign() * disc.sqrt())
    }
}

/// Grid report of the compatibility relation between `M` and `Q`.
///
/// With `b1 = 0` and constant coefficients this is the first-mode relation
/// with `C0'` taken from `cfg.c0`; with `b1 ≠ 0` the general relation,
/// which needs `cfg.phase`; with variable coefficients the printed
/// variable-coefficient relation.
pub fn check_compatibility(
    m: &ScalarField,
    q: &ScalarField,
    c: &PdeCoefficients,
    cfg: &DressingConfig,
    grid: &GridSpec,
    opts: GridOptions,
) -> Result<ResidualReport> {
    if !c.b1.is_zero() {
        let h = cfg
            .phase
            .as_ref()
            .ok_or_else(|| Error::PreconditionFailure("b1 != 0: a phase must be supplied".into()))?;
        return check_compat_b1::<f64>(m, q, h, c, grid, opts);
    }
    match ConstCoefs::from(c) {
        Some(k) => check_compat_const(m, q, &k, cfg, grid, opts),
        None => check_compat_variable(m, q, c, cfg, grid, opts),
    }
}

fn check_compat_const(
    m: &ScalarField,
    q: &ScalarField,
    k: &ConstCoefs,
    cfg: &DressingConfig,
    grid: &GridSpec,
    opts: GridOptions,
) -> Result<ResidualReport> {
    let mroot = k.mroot(cfg.branch)?;
    let anti = antiderivative(&(m.clone() - q.clone()), cfg);
    let c0p = cfg.c0.dt();
    residual_grid_with::<f64, _>("compat_first_mode", "", grid, opts, |x, t, dens| {
        let p = pair_jets::<f64>(m, q, x, t, dens)?;
        let i = anti.f_t.eval_jet_recording::<f64>(x, t, dens)?.value;
        Ok(compat_terms(&p, i, k, mroot, coef::<f64>(&c0p, x, t)?))
    })
}

/// `C0'(t)` per time row minimizing the first-mode relation in least
/// squares over `x`. Rows without regular points yield `NaN`.
pub fn fit_c0_prime(
    m: &ScalarField,
    q: &ScalarField,
    c: &PdeCoefficients,
    cfg: &DressingConfig,
    grid: &GridSpec,
    exec: Exec,
) -> Result<Vec<(f64, f64)>> {
    require_b1_zero(c)?;
    let k = ConstCoefs::from(c)
        .ok_or_else(|| Error::PreconditionFailure("fitting C0' requires constant coefficients".into()))?;
    let mroot = k.mroot(cfg.branch)?;
    let anti = antiderivative(&(m.clone() - q.clone()), cfg);
    let xs = grid.xs();
    let rows = exec.map(grid.nt, |j| {
        let t = grid.t(j);
        let (mut sum, mut n) = (0.0, 0usize);
        for &x in &xs {
            let mut dens = Vec::new();
            let r = pair_jets::<f64>(m, q, x, t, &mut dens).and_then(|p| {
                let i = anti.f_t.eval_jet_recording::<f64>(x, t, &mut dens)?.value;
                Ok(compat_terms(&p, i, &k, mroot, 0.0).value)
            });
            if let Ok(r) = r {
                if r.is_finite() && dens.iter().all(|d| d.norm() >= crate::equations::EPS_SING) {
                    sum += r;
                    n += 1;
                }
            }
        }
        let c0p = if n > 0 { -sum / n as f64 / (16.0 * k.k0) } else { f64::NAN };
        (t, c0p)
    });
    Ok(rows)
}

/// The general-`b1` relation, as printed.
pub fn check_compat_b1<S: Scalar>(
    m: &ScalarField,
    q: &ScalarField,
    h: &ScalarField,
    c: &PdeCoefficients,
    grid: &GridSpec,
    opts: GridOptions,
) -> Result<ResidualReport> {
    residual_grid_with::<S, _>("compat_general", "", grid, opts, |x, t, dens| {
        let p = pair_jets::<S>(m, q, x, t, dens)?;
        let hj = h.eval_jet_recording::<S>(x, t, dens)?;
        let k = |f: &ScalarField| coef::<S>(f, x, t);
        let (b1, h1, h2, k0) = (k(&c.b1)?, k(&c.h1)?, k(&c.h2)?, k(&c.k0)?);
        let (p1, p3) = (k(&c.phi[0])?, k(&c.phi[2])?);
        let (mm, qq) = (p.m.value, p.q.value);
        let f = S::from_f64;
        let d = mm - qq;
        Ok(Residual::from_terms(&[
            d * b1 * k0 * hj.dxx,
            hj.dx * (mm * (b1 * h1 - h2) + qq * (-b1 * h1 + h2) + f(2.0) * b1 * k0 * (p.m.dx - p.q.dx)),
            (f(2.0) + mm * b1 + qq * b1) * k0 * hj.dx * hj.dx,
            d * (mm * mm * b1 * p3 - qq * qq * b1 * p3),
            d * (mm - qq) * (-p3 + b1 * (p1 + p3)),
            d * b1 * (b1 * (p.m.dt - p.q.dt) + h2 * (-p.m.dx + p.q.dx)),
        ]))
    })
}

/// The printed variable-coefficient relation, with every open parenthesis
/// closed at the end.
pub fn check_compat_variable(
    m: &ScalarField,
    q: &ScalarField,
    c: &PdeCoefficients,
    cfg: &DressingConfig,
    grid: &GridSpec,
    opts: GridOptions,
) -> Result<ResidualReport> {
    require_b1_zero(c)?;
    let s = cfg.branch.sign();
    let disc = c.h2.square() + 8.0 * c.k0.clone() * c.phi[2].clone();
    let mfield = disc.sqrt();
    let inner = (q.clone() - m.clone()) * (c.h2.clone() + s * mfield.clone()) / c.k0.clone();
    let x_ref = cfg.x_ref.unwrap_or_else(|| decaying_end(&(m.clone() - q.clone())));
    let int_dt = inner.dt().integrate_x(x_ref);
    let c0p = cfg.c0.dt();
    residual_grid_with::<f64, _>("compat_variable", "", grid, opts, |x, t, dens| {
        let p = pair_jets::<f64>(m, q, x, t, dens)?;
        let cj = |f: &ScalarField, dens: &mut Vec<Complex64>| coef_jet::<f64>(f, x, t, dens);
        let (h1, h2, k0) = (cj(&c.h1, dens)?, cj(&c.h2, dens)?, cj(&c.k0, dens)?);
        let (p2, p3) = (cj(&c.phi[1], dens)?, cj(&c.phi[2], dens)?);
        let mr = mfield.eval_jet_recording::<f64>(x, t, dens)?.value;
        let i = int_dt.eval_jet_recording::<f64>(x, t, dens)?.value;
        let (mm, qq) = (p.m.value, p.q.value);
        let (mx, qx) = (p.m.dx, p.q.dx);
        let d = mm - qq;
        let d2 = mm * mm - qq * qq;
        let (h2v, k0v) = (h2.value, k0.value);
        let big = [
            s * h2v.powi(3) * d2,
            2.0 * h1.value * d * (s * mr * mr + h2v * mr),
            h2v * h2v * (d * (mm + qq) * mr - s * 2.0 * mm * k0.dx + s * 2.0 * qq * k0.dx + s * 6.0 * k0v * (mx - qx)),
            2.0 * h2v * (s * 4.0 * k0v * p3.value * d2 + s * k0v * h2.dx * d - mr * (k0.dx * d + k0v * (mx - qx))),
            2.0 * k0v
                * mr
                * (2.0 * d * (2.0 * p2.value + 3.0 * p3.value * (mm + qq)) - 4.0 * coef::<f64>(&c0p, x, t)?
                    + h2.dx * d
                    - s * 4.0 * p3.value * k0.dx * d
                    + s * 24.0 * p3.value * k0v * (mx - qx)
                    + s * 4.0 * p3.dx * k0v * d),
        ];
        let mut terms = vec![i * 4.0 * k0v * (qq - mm) * mr];
        terms.extend(big.iter().map(|b| 2.0 * d * b));
        Ok(Residual::from_terms(&terms))
    })
}

/// `−(M−Q)b1H_t + H_x(Mh2 − Qh2 − 2k0H_x) + (M−Q)²φ3`.
pub fn check_hamilton_jacobi(
    m: &ScalarField,
    q: &ScalarField,
    h: &ScalarField,
    c: &PdeCoefficients,
    grid: &GridSpec,
    opts: GridOptions,
) -> Result<ResidualReport> {
    residual_grid_with::<f64, _>("hamilton_jacobi", "", grid, opts, |x, t, dens| {
        let p = pair_jets::<f64>(m, q, x, t, dens)?;
        let hj = h.eval_jet_recording::<f64>(x, t, dens)?;
        let k = |f: &ScalarField| coef::<f64>(f, x, t);
        let (b1, h2, k0, p3) = (k(&c.b1)?, k(&c.h2)?, k(&c.k0)?, k(&c.phi[2])?);
        let d = p.m.value - p.q.value;
        Ok(Residual::from_terms(&[
            -d * b1 * hj.dt,
            hj.dx * (p.m.value * h2 - p.q.value * h2),
            -2.0 * k0 * hj.dx * hj.dx,
            d * d * p3,
        ]))
    })
}

/// A dressed field with its phase and checks.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "DressedRepr", into = "DressedRepr")]
pub struct DressedSolution {
    pub h: ScalarField,
    pub u: ScalarField,
    pub compat: ResidualReport,
    pub hj: ResidualReport,
}

#[derive(Serialize, Deserialize)]
struct DressedRepr {
    #[serde(rename = "H")]
    h: String,
    u: String,
    compat: ResidualReport,
    hj: ResidualReport,
}

impl From<DressedSolution> for DressedRepr {
    fn from(d: DressedSolution) -> Self {
        DressedRepr { h: d.h.to_sexpr(), u: d.u.to_sexpr(), compat: d.compat, hj: d.hj }
    }
}

impl TryFrom<DressedRepr> for DressedSolution {
    type Error = Error;

    fn try_from(r: DressedRepr) -> Result<Self> {
        Ok(DressedSolution {
            h: ScalarField::from_sexpr(&r.h)?,
            u: ScalarField::from_sexpr(&r.u)?,
            compat: r.compat,
            hj: r.hj,
        })
    }
}

/// Builds `H`, dresses, and runs both checks.
pub fn first_mode(
    m: &ScalarField,
    q: &ScalarField,
    c: &PdeCoefficients,
    cfg: &DressingConfig,
    grid: &GridSpec,
    opts: GridOptions,
) -> Result<DressedSolution> {
    let h = compute_h(m, q, c, cfg)?;
    let u = dress(m, q, &h);
    let compat = check_compatibility(m, q, c, cfg, grid, opts)?;
    let hj = check_hamilton_jacobi(m, q, &h, c, grid, opts)?;
    Ok(DressedSolution { h, u, compat, hj })
}

/// Tolerance of construction-stage checks.
pub const STAGE_TOL: f64 = 1e-6;
/// Tolerance of the final residual.
pub const FINAL_TOL: f64 = 1e-8;

fn stage_guard(r: &ResidualReport) -> Result<()> {
    if r.max_scaled > STAGE_TOL || r.evaluated == 0 {
        return Err(Error::CompatibilityFailure { equation: r.equation.clone(), max_abs: r.max_abs, tol: STAGE_TOL });
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct Level2Dressing {
    pub inner: [DressedSolution; 2],
    pub outer: DressedSolution,
    /// Final field against the special-form equation.
    pub residual: ResidualReport,
}

/// Dresses `(M0, Q0)` and `(M1, Q1)`, then dresses the results.
pub fn dress_level2(
    pairs: [(&ScalarField, &ScalarField); 2],
    c: &PdeCoefficients,
    cfg: &DressingConfig,
    grid: &GridSpec,
    opts: GridOptions,
) -> Result<Level2Dressing> {
    let mut inner = Vec::with_capacity(2);
    for (m, q) in pairs {
        let d = first_mode(m, q, c, cfg, grid, opts)?;
        stage_guard(&d.compat)?;
        stage_guard(&d.hj)?;
        inner.push(d);
    }
    let (m, q) = (inner[0].u.clone(), inner[1].u.clone());
    let outer = first_mode(&m, &q, c, cfg, grid, opts)?;
    stage_guard(&outer.compat)?;
    stage_guard(&outer.hj)?;
    let eq = Equation::special(c.clone())?;
    let residual = residual_grid::<f64>(&eq, &outer.u, "level2", grid, GridOptions { tol: FINAL_TOL, ..opts })?;
    let inner: [DressedSolution; 2] = inner.try_into().expect("two stages");
    Ok(Level2Dressing { inner, outer, residual })
}

/// Cases in which the quartic equation admits first-mode dressing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuarticCase {
    /// One of `M, Q` is the constant `−k0/k1` and
    /// `(k0 + k1)(k0 + a1k1)(k0 + 2a1k1) = 0`.
    ConstantRoot,
    /// `b1 = k1/k0`, `b2 = 0`.
    MatchedTime,
    /// `b1 = b2 = k1 = 0`.
    Semilinear,
}

/// Eligible cases for constant coefficients with root parameter `a1`.
/// `constant_member` is the value of `M` or `Q` when one of them is constant.
pub fn quartic_cases(c: &PdeCoefficients, a1: f64, constant_member: Option<f64>) -> Result<Vec<QuarticCase>> {
    let get = |n: &str| {
        c.constant(n).ok_or_else(|| Error::PreconditionFailure(format!("coefficient {n} must be a real constant")))
    };
    let (b1, b2, k0, k1) = (get("b1")?, get("b2")?, get("k0")?, get("k1")?);
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()));
    let mut out = Vec::new();
    if k1 != 0.0 {
        if let Some(v) = constant_member {
            if close(v, -k0 / k1) && close((k0 + k1) * (k0 + a1 * k1) * (k0 + 2.0 * a1 * k1), 0.0) {
                out.push(QuarticCase::ConstantRoot);
            }
        }
    }
    if k0 != 0.0 && close(b1, k1 / k0) && b2 == 0.0 {
        out.push(QuarticCase::MatchedTime);
    }
    if b1 == 0.0 && b2 == 0.0 && k1 == 0.0 {
        out.push(QuarticCase::Semilinear);
    }
    Ok(out)
}

/// Member of the two-parameter FhNS family with constants in the exponents.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub a: f64,
    pub phi3: f64,
    pub c1: f64,
    pub c2: f64,
}

impl FamilyMember {
    pub fn field(&self) -> ScalarField {
        catalog::family(self.a, self.phi3, self.c1, self.c2)
    }

    pub fn from_params(p: &Params) -> Result<Self> {
        let g = |k: &str| p.get(k).copied().ok_or_else(|| Error::FamilyMismatch(format!("missing parameter {k}")));
        Ok(Self { a: g("a")?, phi3: g("phi3")?, c1: g("C1")?, c2: g("C2")? })
    }

    /// Reads a `fhns_two_param` catalog entry.
    pub fn from_entry(e: &CatalogEntry) -> Result<Self> {
        if e.id != "fhns_two_param" && e.id != "fhns_diamond_out" {
            return Err(Error::FamilyMismatch(format!("`{}` is not a family member", e.id)));
        }
        if e.id == "fhns_diamond_out" {
            let g = |k: &str| e.params.get(k).copied().unwrap_or(0.0);
            return Ok(Self {
                a: g("a"),
                phi3: g("phi3"),
                c1: (g("C1").exp() + g("V1").exp()).ln(),
                c2: (g("C2").exp() + g("V2").exp()).ln(),
            });
        }
        Self::from_params(&e.params)
    }

    pub fn entry(&self) -> CatalogEntry {
        let params: Params =
            [("a", self.a), ("phi3", self.phi3), ("C1", self.c1), ("C2", self.c2)].iter().map(|(k, v)| (k.to_string(), *v)).collect();
        CatalogEntry {
            id: "fhns_two_param".into(),
            paper_eq: "(2.43)".into(),
            params,
            expression: self.field(),
            target: Equation::Fhns { a: self.a, phi3: self.phi3 },
        }
    }
}

/// `ln(e^C + e^V)`.
pub fn combine_constant(c: f64, v: f64) -> f64 {
    let m = c.max(v);
    m + ((c - m).exp() + (v - m).exp()).ln()
}

/// Composition of two family members: constants combine as
/// `ln(e^{C_i} + e^{V_i})`.
pub fn diamond(m: &FamilyMember, q: &FamilyMember) -> Result<FamilyMember> {
    if m.a != q.a || m.phi3 != q.phi3 {
        return Err(Error::FamilyMismatch(format!(
            "(a, phi3) = ({}, {}) vs ({}, {})",
            m.a, m.phi3, q.a, q.phi3
        )));
    }
    Ok(FamilyMember { a: m.a, phi3: m.phi3, c1: combine_constant(m.c1, q.c1), c2: combine_constant(m.c2, q.c2) })
}

/// Composition of two `fhns_two_param` entries as a catalog entry.
pub fn diamond_entry(m: &CatalogEntry, q: &CatalogEntry) -> Result<CatalogEntry> {
    let out = diamond(&FamilyMember::from_entry(m)?, &FamilyMember::from_entry(q)?)?;
    let mut e = out.entry();
    e.id = "fhns_diamond_out".into();
    e.paper_eq = "(2.44)".into();
    Ok(e)
}
