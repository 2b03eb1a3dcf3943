//! Residual functionals and grid verification.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::ScalarField;
use crate::grid::GridSpec;
use crate::jet::Jet2;
use crate::scalar::Scalar;

/// Denominators smaller than this mark a grid point as singular.
pub const EPS_SING: f64 = 1e-6;

/// Default scale-aware tolerance for verification.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Coefficients of
/// `(1+b1u+b2u²)u_t − (h1+h2u+h3u²)u_x − g0u_x² − (k0+k1u)u_xx + Σφ_i u^i = 0`.
#[derive(Clone, Debug)]
pub struct PdeCoefficients {
    pub b1: ScalarField,
    pub b2: ScalarField,
    pub h1: ScalarField,
    pub h2: ScalarField,
    pub h3: ScalarField,
    pub g0: ScalarField,
    pub k0: ScalarField,
    pub k1: ScalarField,
    pub phi: [ScalarField; 4],
}

impl Default for PdeCoefficients {
    fn default() -> Self {
        let z = ScalarField::zero;
        Self { b1: z(), b2: z(), h1: z(), h2: z(), h3: z(), g0: z(), k0: z(), k1: z(), phi: [z(), z(), z(), z()] }
    }
}

const NAMES: [&str; 12] = ["b1", "b2", "h1", "h2", "h3", "g0", "k0", "k1", "phi1", "phi2", "phi3", "phi4"];

impl PdeCoefficients {
    fn slots(&self) -> [&ScalarField; 12] {
        [
            &self.b1, &self.b2, &self.h1, &self.h2, &self.h3, &self.g0, &self.k0, &self.k1, &self.phi[0], &self.phi[1],
            &self.phi[2], &self.phi[3],
        ]
    }

    fn slots_mut(&mut self) -> [&mut ScalarField; 12] {
        let [p1, p2, p3, p4] = &mut self.phi;
        [
            &mut self.b1, &mut self.b2, &mut self.h1, &mut self.h2, &mut self.h3, &mut self.g0, &mut self.k0,
            &mut self.k1, p1, p2, p3, p4,
        ]
    }

    pub fn set(mut self, name: &str, v: impl Into<ScalarField>) -> Result<Self> {
        let i = NAMES.iter().position(|n| *n == name).ok_or_else(|| Error::UnknownId(name.into()))?;
        *self.slots_mut()[i] = v.into();
        Ok(self)
    }

    /// FhNS equation `u_t − φ3u_xx/(2a²) − φ3u + φ3u³ = 0`.
    pub fn fhns(a: f64, phi3: f64) -> Self {
        Self {
            k0: (phi3 / (2.0 * a * a)).into(),
            phi: [(-phi3).into(), 0.0.into(), phi3.into(), 0.0.into()],
            ..Self::default()
        }
    }

    /// Source term `u(a1−u)(a2−u)(1−u)` written as `Σφ_i u^i`, with unit
    /// diffusion.
    pub fn quartic_roots(a1: f64, a2: f64) -> Self {
        Self {
            k0: 1.0.into(),
            phi: [(a2 * a1).into(), (-(a1 + a2 + a1 * a2)).into(), (1.0 + a1 + a2).into(), (-1.0).into()],
            ..Self::default()
        }
    }

    /// `(a1−h1u)(u_t−u_xx) − h1(a1+h1u)u_x − 2h1u_x² − a1(a1²+h1²)u(1−u²)/2 = 0`,
    /// divided through by `a1`.
    pub fn example2(a1: f64, h1: f64) -> Self {
        let s = (a1 * a1 + h1 * h1) / 2.0;
        Self {
            b1: (-h1 / a1).into(),
            k0: 1.0.into(),
            k1: (-h1 / a1).into(),
            h1: h1.into(),
            h2: (h1 * h1 / a1).into(),
            g0: (2.0 * h1 / a1).into(),
            phi: [(-s).into(), 0.0.into(), s.into(), 0.0.into()],
            ..Self::default()
        }
    }

    /// `u_t + 2h1²u_xx/φ3 − h1(1+4u)u_x − φ3u(1−u²) = 0`.
    pub fn example3(h1: f64, phi3: f64) -> Self {
        Self {
            k0: (-2.0 * h1 * h1 / phi3).into(),
            h1: h1.into(),
            h2: (4.0 * h1).into(),
            phi: [(-phi3).into(), 0.0.into(), phi3.into(), 0.0.into()],
            ..Self::default()
        }
    }

    /// `(1−u)u_t − (1−u)u_xx + (−1/a1 + u/a1 − 2a1φ3u)u_x − 2u_x² − φ3u(1−u²) = 0`.
    pub fn example4(a1: f64, phi3: f64) -> Self {
        Self {
            b1: (-1.0).into(),
            k0: 1.0.into(),
            k1: (-1.0).into(),
            h1: (1.0 / a1).into(),
            h2: (-1.0 / a1 + 2.0 * a1 * phi3).into(),
            g0: 2.0.into(),
            phi: [(-phi3).into(), 0.0.into(), phi3.into(), 0.0.into()],
            ..Self::default()
        }
    }

    /// `u_t − k0u_xx − (h1+h2u)u_x + φ1u + φ2u² = 0` with `h1 = −2k0φ2/h2`.
    pub fn fkpp_modified(k0: f64, h2: f64, phi1: f64, phi2: f64) -> Self {
        Self {
            k0: k0.into(),
            h1: (-2.0 * k0 * phi2 / h2).into(),
            h2: h2.into(),
            phi: [phi1.into(), phi2.into(), 0.0.into(), 0.0.into()],
            ..Self::default()
        }
    }

    /// True when the coefficients restrict to the special form (no `b2, h3,
    /// g0, k1, φ4`).
    pub fn is_special(&self) -> bool {
        [&self.b2, &self.h3, &self.g0, &self.k1, &self.phi[3]].iter().all(|f| f.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.slots().iter().all(|f| f.as_const().is_some())
    }

    /// Real constant value of a named coefficient.
    pub fn constant(&self, name: &str) -> Option<f64> {
        let i = NAMES.iter().position(|n| *n == name)?;
        self.slots()[i].as_real_const()
    }

    pub fn to_map(&self) -> BTreeMap<String, String> {
        NAMES
            .iter()
            .zip(self.slots())
            .filter(|(_, f)| !f.is_zero())
            .map(|(n, f)| (n.to_string(), f.to_sexpr()))
            .collect()
    }

    pub fn from_map(m: &BTreeMap<String, String>) -> Result<Self> {
        let mut c = Self::default();
        for (k, v) in m {
            c = c.set(k, ScalarField::from_sexpr(v)?)?;
        }
        Ok(c)
    }
}

/// Linear parabolic forms.
#[derive(Clone, Debug)]
pub enum LinearForm {
    /// `U_t + (φ3a1/a²)U_x − (φ3/(2a²))U_xx = 0`, the form consistent with
    /// the phase `H = −ln U + a1x − (2a²+a1²)tφ3/(2a²)`.
    Thm22 { a: f64, a1: Complex64, phi3: f64 },
    /// Same with diffusion `φ3/a²`.
    Thm22AsPrinted { a: f64, a1: Complex64, phi3: f64 },
    /// `U_t + 2φ1k0U_x − k0U_xx − U(∫φ1_t dx + φ1 + k0φ1² − k0φ1_x) = 0`.
    Thm24 { k0: ScalarField, phi1: ScalarField, int_phi1_t: ScalarField },
    /// `U_t − rU − k0U_xx = 0`.
    FkppPotential { k0: f64, r: ScalarField },
}

impl LinearForm {
    pub fn thm24(k0: ScalarField, phi1: ScalarField, x_ref: f64) -> Self {
        let int_phi1_t = phi1.dt().integrate_x(x_ref);
        LinearForm::Thm24 { k0, phi1, int_phi1_t }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LinearForm::Thm22 { .. } => "linear_thm22",
            LinearForm::Thm22AsPrinted { .. } => "linear_thm22_as_printed",
            LinearForm::Thm24 { .. } => "linear_thm24",
            LinearForm::FkppPotential { .. } => "linear_fkpp_potential",
        }
    }
}

/// Target equation of a residual check. Serializes as a tagged object with
/// field coefficients written as s-expressions.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "EquationRepr", into = "EquationRepr")]
pub enum Equation {
    General(PdeCoefficients),
    Special(PdeCoefficients),
    Fhns { a: f64, phi3: f64 },
    /// `u_t − k0u_xx − φ1u + φ3u³ = 0` with field coefficients.
    FhnsVar { k0: ScalarField, phi1: ScalarField, phi3: ScalarField },
    Linear(LinearForm),
    /// `φ_t − 3√(2φ)φ_x + φ_x²/φ + φ_xx = 0`, applied to the field itself.
    Phi1Compat,
    /// `2a²φ3 + 2a²H_t + φ3H_x² − φ3H_xx = 0` for a phase `H`.
    Eq8 { a: f64, phi3: f64 },
    /// `u_t − u_xx + h1u_x + 2u_x²/u = 0`.
    Degenerate { h1: f64 },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum EquationRepr {
    General { coefficients: BTreeMap<String, String> },
    Special { coefficients: BTreeMap<String, String> },
    Fhns { a: f64, phi3: f64 },
    FhnsVar { k0: String, phi1: String, phi3: String },
    LinearThm22 { a: f64, a1: Complex64, phi3: f64, as_printed: bool },
    LinearThm24 { k0: String, phi1: String, int_phi1_t: String },
    LinearFkppPotential { k0: f64, r: String },
    Phi1Compat,
    Eq8 { a: f64, phi3: f64 },
    Degenerate { h1: f64 },
}

impl From<Equation> for EquationRepr {
    fn from(e: Equation) -> Self {
        let s = |f: &ScalarField| f.to_sexpr();
        match e {
            Equation::General(c) => EquationRepr::General { coefficients: c.to_map() },
            Equation::Special(c) => EquationRepr::Special { coefficients: c.to_map() },
            Equation::Fhns { a, phi3 } => EquationRepr::Fhns { a, phi3 },
            Equation::FhnsVar { k0, phi1, phi3 } => EquationRepr::FhnsVar { k0: s(&k0), phi1: s(&phi1), phi3: s(&phi3) },
            Equation::Linear(LinearForm::Thm22 { a, a1, phi3 }) => {
                EquationRepr::LinearThm22 { a, a1, phi3, as_printed: false }
            }
            Equation::Linear(LinearForm::Thm22AsPrinted { a, a1, phi3 }) => {
                EquationRepr::LinearThm22 { a, a1, phi3, as_printed: true }
            }
            Equation::Linear(LinearForm::Thm24 { k0, phi1, int_phi1_t }) => {
                EquationRepr::LinearThm24 { k0: s(&k0), phi1: s(&phi1), int_phi1_t: s(&int_phi1_t) }
            }
            Equation::Linear(LinearForm::FkppPotential { k0, r }) => EquationRepr::LinearFkppPotential { k0, r: s(&r) },
            Equation::Phi1Compat => EquationRepr::Phi1Compat,
            Equation::Eq8 { a, phi3 } => EquationRepr::Eq8 { a, phi3 },
            Equation::Degenerate { h1 } => EquationRepr::Degenerate { h1 },
        }
    }
}

impl TryFrom<EquationRepr> for Equation {
    type Error = Error;

    fn try_from(r: EquationRepr) -> Result<Self> {
        let p = |s: &str| ScalarField::from_sexpr(s);
        Ok(match r {
            EquationRepr::General { coefficients } => Equation::General(PdeCoefficients::from_map(&coefficients)?),
            EquationRepr::Special { coefficients } => Equation::special(PdeCoefficients::from_map(&coefficients)?)?,
            EquationRepr::Fhns { a, phi3 } => Equation::Fhns { a, phi3 },
            EquationRepr::FhnsVar { k0, phi1, phi3 } => Equation::FhnsVar { k0: p(&k0)?, phi1: p(&phi1)?, phi3: p(&phi3)? },
            EquationRepr::LinearThm22 { a, a1, phi3, as_printed: false } => Equation::Linear(LinearForm::Thm22 { a, a1, phi3 }),
            EquationRepr::LinearThm22 { a, a1, phi3, as_printed: true } => {
                Equation::Linear(LinearForm::Thm22AsPrinted { a, a1, phi3 })
            }
            EquationRepr::LinearThm24 { k0, phi1, int_phi1_t } => {
                Equation::Linear(LinearForm::Thm24 { k0: p(&k0)?, phi1: p(&phi1)?, int_phi1_t: p(&int_phi1_t)? })
            }
            EquationRepr::LinearFkppPotential { k0, r } => Equation::Linear(LinearForm::FkppPotential { k0, r: p(&r)? }),
            EquationRepr::Phi1Compat => Equation::Phi1Compat,
            EquationRepr::Eq8 { a, phi3 } => Equation::Eq8 { a, phi3 },
            EquationRepr::Degenerate { h1 } => Equation::Degenerate { h1 },
        })
    }
}

/// A pointwise residual with the largest magnitude of its additive terms.
#[derive(Clone, Copy, Debug)]
pub struct Residual<S> {
    pub value: S,
    pub scale: f64,
}

impl<S: Scalar> Residual<S> {
    pub fn from_terms(terms: &[S]) -> Self {
        let mut value = S::zero();
        let mut scale = 0.0_f64;
        for &t in terms {
            value = value + t;
            scale = scale.max(t.norm());
        }
        Self { value, scale }
    }

    pub fn zero() -> Self {
        Self { value: S::zero(), scale: 0.0 }
    }

    /// `|value| / (1 + scale)`.
    pub fn scaled(&self) -> f64 {
        self.value.norm() / (1.0 + self.scale)
    }
}

pub(crate) fn coef<S: Scalar>(f: &ScalarField, x: f64, t: f64) -> Result<S> {
    match f.as_const() {
        Some(c) => S::from_complex(c).ok_or_else(|| Error::Domain(format!("complex coefficient {c} in real mode"))),
        None => f.eval::<S>(x, t),
    }
}

pub(crate) fn coef_jet<S: Scalar>(f: &ScalarField, x: f64, t: f64, dens: &mut Vec<Complex64>) -> Result<Jet2<S>> {
    match f.as_const() {
        Some(c) => Ok(Jet2::constant(
            S::from_complex(c).ok_or_else(|| Error::Domain(format!("complex coefficient {c} in real mode")))?,
        )),
        None => f.eval_jet_recording::<S>(x, t, dens),
    }
}

/// Residual of the general equation from a jet of `u`.
pub fn general_from_jet<S: Scalar>(c: &PdeCoefficients, u: &Jet2<S>, x: f64, t: f64) -> Result<Residual<S>> {
    let k = |f: &ScalarField| coef::<S>(f, x, t);
    let (v, ux) = (u.value, u.dx);
    let v2 = v * v;
    let mut terms = vec![
        u.dt,
        k(&c.b1)? * v * u.dt,
        k(&c.b2)? * v2 * u.dt,
        -k(&c.h1)? * ux,
        -k(&c.h2)? * v * ux,
        -k(&c.h3)? * v2 * ux,
        -k(&c.g0)? * ux * ux,
        -k(&c.k0)? * u.dxx,
        -k(&c.k1)? * v * u.dxx,
    ];
    let mut p = v;
    for phi in &c.phi {
        terms.push(k(phi)? * p);
        p = p * v;
    }
    Ok(Residual::from_terms(&terms))
}

impl Equation {
    pub fn special(c: PdeCoefficients) -> Result<Self> {
        if !c.is_special() {
            return Err(Error::PreconditionFailure("special form requires b2 = h3 = g0 = k1 = phi4 = 0".into()));
        }
        Ok(Equation::Special(c))
    }

    /// True when the equation can be evaluated in real arithmetic.
    pub fn is_real(&self) -> bool {
        let cf = |c: &PdeCoefficients| c.slots().iter().all(|f| !f.has_complex_constants());
        match self {
            Equation::General(c) | Equation::Special(c) => cf(c),
            Equation::FhnsVar { k0, phi1, phi3 } => [k0, phi1, phi3].iter().all(|f| !f.has_complex_constants()),
            Equation::Linear(LinearForm::Thm22 { a1, .. } | LinearForm::Thm22AsPrinted { a1, .. }) => a1.im == 0.0,
            Equation::Linear(LinearForm::Thm24 { k0, phi1, int_phi1_t }) => {
                [k0, phi1, int_phi1_t].iter().all(|f| !f.has_complex_constants())
            }
            Equation::Linear(LinearForm::FkppPotential { r, .. }) => !r.has_complex_constants(),
            _ => true,
        }
    }

    /// The equation written in the general form, when it has one.
    pub fn coefficients(&self) -> Option<PdeCoefficients> {
        match self {
            Equation::General(c) | Equation::Special(c) => Some(c.clone()),
            Equation::Fhns { a, phi3 } => Some(PdeCoefficients::fhns(*a, *phi3)),
            Equation::FhnsVar { k0, phi1, phi3 } => Some(PdeCoefficients {
                k0: k0.clone(),
                phi: [-phi1.clone(), ScalarField::zero(), phi3.clone(), ScalarField::zero()],
                ..PdeCoefficients::default()
            }),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Equation::General(_) => "general".into(),
            Equation::Special(_) => "special".into(),
            Equation::Fhns { .. } => "fhns".into(),
            Equation::FhnsVar { .. } => "fhns_var".into(),
            Equation::Linear(l) => l.name().into(),
            Equation::Phi1Compat => "phi1_compat".into(),
            Equation::Eq8 { .. } => "phase_eq8".into(),
            Equation::Degenerate { .. } => "degenerate".into(),
        }
    }

    /// Residual at `(x, t)`; denominators met while evaluating `u` and any
    /// field coefficients are pushed to `dens`.
    pub fn residual<S: Scalar>(
        &self,
        u: &ScalarField,
        x: f64,
        t: f64,
        dens: &mut Vec<Complex64>,
    ) -> Result<Residual<S>> {
        let j = u.eval_jet_recording::<S>(x, t, dens)?;
        self.residual_from_jet(&j, x, t, dens)
    }

    pub fn residual_from_jet<S: Scalar>(
        &self,
        j: &Jet2<S>,
        x: f64,
        t: f64,
        dens: &mut Vec<Complex64>,
    ) -> Result<Residual<S>> {
        let f = S::from_f64;
        Ok(match self {
            Equation::General(c) | Equation::Special(c) => general_from_jet(c, j, x, t)?,
            Equation::Fhns { a, phi3 } => {
                let p = f(*phi3);
                Residual::from_terms(&[j.dt, -p * j.dxx / f(2.0 * a * a), -p * j.value, p * j.value * j.value * j.value])
            }
            Equation::FhnsVar { k0, phi1, phi3 } => {
                let (k, p1, p3) =
                    (coef::<S>(k0, x, t)?, coef::<S>(phi1, x, t)?, coef::<S>(phi3, x, t)?);
                Residual::from_terms(&[j.dt, -k * j.dxx, -p1 * j.value, p3 * j.value * j.value * j.value])
            }
            Equation::Linear(form) => match form {
                LinearForm::Thm22 { a, a1, phi3 } | LinearForm::Thm22AsPrinted { a, a1, phi3 } => {
                    let a1 = S::from_complex(*a1).ok_or_else(|| Error::Domain("imaginary a1 in real mode".into()))?;
                    let diff = if matches!(form, LinearForm::Thm22 { .. }) { 2.0 } else { 1.0 };
                    let p = f(*phi3);
                    Residual::from_terms(&[j.dt, p * a1 * j.dx / f(a * a), -p * j.dxx / f(diff * a * a)])
                }
                LinearForm::Thm24 { k0, phi1, int_phi1_t } => {
                    let k = coef::<S>(k0, x, t)?;
                    let p = coef_jet::<S>(phi1, x, t, dens)?;
                    let it = coef::<S>(int_phi1_t, x, t)?;
                    let u = j.value;
                    Residual::from_terms(&[
                        j.dt,
                        f(2.0) * p.value * k * j.dx,
                        -k * j.dxx,
                        -u * it,
                        -u * p.value,
                        -u * k * p.value * p.value,
                        u * k * p.dx,
                    ])
                }
                LinearForm::FkppPotential { k0, r } => {
                    let rv = coef::<S>(r, x, t)?;
                    Residual::from_terms(&[j.dt, -rv * j.value, -f(*k0) * j.dxx])
                }
            },
            Equation::Phi1Compat => {
                let two_phi = f(2.0) * j.value;
                let root = two_phi.sqrt().ok_or_else(|| Error::Domain("sqrt(2 phi1) of negative".into()))?;
                dens.push(j.value.to_complex());
                if j.value.norm() < crate::field::EPS_POLE {
                    return Err(Error::Pole { x, t, magnitude: j.value.norm() });
                }
                Residual::from_terms(&[j.dt, -f(3.0) * root * j.dx, j.dx * j.dx / j.value, j.dxx])
            }
            Equation::Eq8 { a, phi3 } => {
                let (a2, p) = (f(2.0 * a * a), f(*phi3));
                Residual::from_terms(&[a2 * p, a2 * j.dt, p * j.dx * j.dx, -p * j.dxx])
            }
            Equation::Degenerate { h1 } => {
                dens.push(j.value.to_complex());
                if j.value.norm() < crate::field::EPS_POLE {
                    return Err(Error::Pole { x, t, magnitude: j.value.norm() });
                }
                Residual::from_terms(&[j.dt, -j.dxx, f(*h1) * j.dx, f(2.0) * j.dx * j.dx / j.value])
            }
        })
    }
}

/// Pointwise residual of the general equation.
pub fn residual_general<S: Scalar>(c: &PdeCoefficients, u: &ScalarField, x: f64, t: f64) -> Result<S> {
    let j = u.eval_jet::<S>(x, t)?;
    Ok(general_from_jet(c, &j, x, t)?.value)
}

/// Pointwise residual of the special form; rejects general-only coefficients.
pub fn residual_special<S: Scalar>(c: &PdeCoefficients, u: &ScalarField, x: f64, t: f64) -> Result<S> {
    if !c.is_special() {
        return Err(Error::PreconditionFailure("special form requires b2 = h3 = g0 = k1 = phi4 = 0".into()));
    }
    residual_general(c, u, x, t)
}

pub fn residual_fhns<S: Scalar>(u: &ScalarField, a: f64, phi3: f64, x: f64, t: f64) -> Result<S> {
    if a == 0.0 {
        return Err(Error::PreconditionFailure("a must be nonzero".into()));
    }
    let mut d = Vec::new();
    Ok(Equation::Fhns { a, phi3 }.residual::<S>(u, x, t, &mut d)?.value)
}

pub fn residual_linear_parabolic<S: Scalar>(u: &ScalarField, form: &LinearForm, x: f64, t: f64) -> Result<S> {
    let mut d = Vec::new();
    Ok(Equation::Linear(form.clone()).residual::<S>(u, x, t, &mut d)?.value)
}

/// Outcome of a grid verification. Serializes to the stable report schema;
/// the remaining fields are diagnostics.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResidualReport {
    pub equation: String,
    pub solution_id: String,
    pub grid: GridSpec,
    pub max_abs: f64,
    pub mean_abs: f64,
    pub skipped: usize,
    pub pass: bool,
    #[serde(skip)]
    pub max_scaled: f64,
    #[serde(skip)]
    pub tol: f64,
    #[serde(skip)]
    pub evaluated: usize,
    /// Location of the largest scaled residual.
    #[serde(skip)]
    pub worst: Option<(f64, f64)>,
    /// `(x, t, |residual|)` per evaluated point when requested.
    #[serde(skip)]
    pub per_point: Option<Vec<(f64, f64, f64)>>,
}

impl ResidualReport {
    pub fn summary(&self) -> String {
        format!(
            "{:<24} {:<16} max={:.3e} mean={:.3e} scaled={:.3e} skipped={} {}",
            self.solution_id,
            self.equation,
            self.max_abs,
            self.mean_abs,
            self.max_scaled,
            self.skipped,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Options for [`residual_grid_with`].
#[derive(Clone, Copy, Debug)]
pub struct GridOptions {
    pub tol: f64,
    pub exec: Exec,
    pub keep_points: bool,
    /// Also skip points beside a sign change of a denominator's real part.
    pub sign_change_census: bool,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, exec: Exec::default(), keep_points: false, sign_change_census: true }
    }
}

enum Sample<S> {
    Ok { res: Residual<S>, dens: Vec<Complex64> },
    Singular,
}

#[derive(Default)]
struct RowStats {
    sum: f64,
    max_abs: f64,
    max_scaled: f64,
    worst: Option<(f64, f64)>,
    evaluated: usize,
    skipped: usize,
    fail: bool,
    points: Vec<(f64, f64, f64)>,
}

/// Verifies a pointwise residual over a grid. The closure receives a buffer
/// for the denominators it meets; points where evaluation is singular, or a
/// denominator falls below [`EPS_SING`], are counted as skipped.
pub fn residual_grid_with<S, F>(
    equation: &str,
    solution_id: &str,
    grid: &GridSpec,
    opts: GridOptions,
    f: F,
) -> Result<ResidualReport>
where
    S: Scalar,
    F: Fn(f64, f64, &mut Vec<Complex64>) -> Result<Residual<S>> + Sync + Send,
{
    grid.validate()?;
    let xs = grid.xs();
    let rows = opts.exec.map(grid.nt, |jt| -> Result<RowStats> {
        let t = grid.t(jt);
        let samples: Vec<Sample<S>> = xs
            .iter()
            .map(|&x| {
                let mut dens = Vec::new();
                match f(x, t, &mut dens) {
                    Ok(res) if dens.iter().all(|d| d.norm() >= EPS_SING) => Ok(Sample::Ok { res, dens }),
                    Ok(_) => Ok(Sample::Singular),
                    Err(e) if e.is_singular() => Ok(Sample::Singular),
                    Err(e) => Err(e),
                }
            })
            .collect::<Result<_>>()?;
        let mut near_root = vec![false; xs.len()];
        if opts.sign_change_census {
            for i in 0..xs.len().saturating_sub(1) {
                if let (Sample::Ok { dens: d0, .. }, Sample::Ok { dens: d1, .. }) = (&samples[i], &samples[i + 1]) {
                    if d0.len() != d1.len() {
                        continue;
                    }
                    for k in 0..d0.len() {
                        let real = d0[k].im.abs() <= 1e-12 * d0[k].norm() && d1[k].im.abs() <= 1e-12 * d1[k].norm();
                        if real && d0[k].re.signum() != d1[k].re.signum()
                            && crosses_zero(&f, xs[i], xs[i + 1], t, k, d0[k].re)
                        {
                            near_root[i] = true;
                            near_root[i + 1] = true;
                        }
                    }
                }
            }
        }
        let mut st = RowStats::default();
        for (i, s) in samples.iter().enumerate() {
            match s {
                Sample::Ok { res, .. } if !near_root[i] => {
                    let r = res.value.norm();
                    let sc = res.scaled();
                    if !r.is_finite() {
                        st.skipped += 1;
                        continue;
                    }
                    st.sum += r;
                    st.evaluated += 1;
                    st.max_abs = st.max_abs.max(r);
                    if sc > st.max_scaled || st.worst.is_none() {
                        st.max_scaled = st.max_scaled.max(sc);
                        st.worst = Some((xs[i], t));
                    }
                    if sc > opts.tol {
                        st.fail = true;
                    }
                    if opts.keep_points {
                        st.points.push((xs[i], t, r));
                    }
                }
                _ => st.skipped += 1,
            }
        }
        Ok(st)
    });
    let mut total = RowStats::default();
    for row in rows {
        let row = row?;
        total.sum += row.sum;
        total.evaluated += row.evaluated;
        total.skipped += row.skipped;
        total.fail |= row.fail;
        total.max_abs = total.max_abs.max(row.max_abs);
        if row.max_scaled > total.max_scaled || total.worst.is_none() {
            total.max_scaled = total.max_scaled.max(row.max_scaled);
            total.worst = row.worst.or(total.worst);
        }
        total.points.extend(row.points);
    }
    let mean = if total.evaluated > 0 { total.sum / total.evaluated as f64 } else { 0.0 };
    Ok(ResidualReport {
        equation: equation.to_string(),
        solution_id: solution_id.to_string(),
        grid: *grid,
        max_abs: total.max_abs,
        mean_abs: mean,
        skipped: total.skipped,
        pass: !total.fail && total.evaluated > 0,
        max_scaled: total.max_scaled,
        tol: opts.tol,
        evaluated: total.evaluated,
        worst: total.worst,
        per_point: opts.keep_points.then_some(total.points),
    })
}

/// Bisects denominator `k` on `[x0, x1]`; true when it has a genuine root
/// there rather than a jump.
fn crosses_zero<S, F>(f: &F, mut x0: f64, mut x1: f64, t: f64, k: usize, d0: f64) -> bool
where
    S: Scalar,
    F: Fn(f64, f64, &mut Vec<Complex64>) -> Result<Residual<S>>,
{
    let den_at = |x: f64| -> Option<f64> {
        let mut dens = Vec::new();
        let _ = f(x, t, &mut dens);
        dens.get(k).map(|d| d.re)
    };
    let s0 = d0.signum();
    let mut last = d0.abs();
    for _ in 0..60 {
        let xm = 0.5 * (x0 + x1);
        match den_at(xm) {
            Some(d) => {
                last = d.abs();
                if d.signum() == s0 {
                    x0 = xm;
                } else {
                    x1 = xm;
                }
            }
            None => return true,
        }
        if (x1 - x0).abs() < 1e-12 * (1.0 + x0.abs()) {
            break;
        }
    }
    last < 1e-6
}

/// Grid report of a field against an [`Equation`].
pub fn residual_grid<S: Scalar>(
    eq: &Equation,
    u: &ScalarField,
    solution_id: &str,
    grid: &GridSpec,
    opts: GridOptions,
) -> Result<ResidualReport> {
    residual_grid_with::<S, _>(&eq.name(), solution_id, grid, opts, |x, t, dens| eq.residual::<S>(u, x, t, dens))
}

/// Largest `|Im u|/(1 + |u|)` over the non-singular grid points.
pub fn max_imag_part(u: &ScalarField, grid: &GridSpec, exec: Exec) -> Result<f64> {
    let xs = grid.xs();
    let rows = exec.map(grid.nt, |j| {
        let t = grid.t(j);
        let mut m = 0.0_f64;
        for &x in &xs {
            let mut dens = Vec::new();
            if let Ok(v) = u.eval_jet_recording::<Complex64>(x, t, &mut dens) {
                if dens.iter().all(|d| d.norm() >= EPS_SING) {
                    m = m.max(v.value.im.abs() / (1.0 + v.value.norm()));
                }
            }
        }
        m
    });
    Ok(rows.into_iter().fold(0.0, f64::max))
}

/// Central-difference residual of the general equation (one Richardson
/// extrapolation on each derivative), independent of the jet machinery.
pub fn fd_residual_general(c: &PdeCoefficients, u: &dyn Fn(f64, f64) -> f64, x: f64, t: f64, h: f64) -> Result<f64> {
    let d1 = |g: &dyn Fn(f64) -> f64, h: f64| (g(h) - g(-h)) / (2.0 * h);
    let d2 = |g: &dyn Fn(f64) -> f64, h: f64| (g(h) - 2.0 * g(0.0) + g(-h)) / (h * h);
    let rich = |a: f64, b: f64| (4.0 * b - a) / 3.0;
    let gx = |s: f64| u(x + s, t);
    let gt = |s: f64| u(x, t + s);
    let ux = rich(d1(&gx, h), d1(&gx, h / 2.0));
    let ut = rich(d1(&gt, h), d1(&gt, h / 2.0));
    let uxx = rich(d2(&gx, h), d2(&gx, h / 2.0));
    let j = Jet2 { value: u(x, t), dx: ux, dt: ut, dxx: uxx, dxt: 0.0 };
    Ok(general_from_jet(c, &j, x, t)?.value)
}
