//! Linearizing correspondences. Solutions of linear parabolic equations are
//! mapped to FhNS solutions through a Riccati link, or to a modified FKPP
//! equation through a logarithmic derivative.

use std::sync::Arc;

use num_complex::Complex64;

use crate::equations::{residual_grid, residual_grid_with, Equation, GridOptions, LinearForm, Residual, ResidualReport};
use crate::error::{Error, Result};
use crate::field::{ScalarField, EPS_POLE};
use crate::grid::GridSpec;
use crate::ode::{LinearOde2, OdeSolution};
use crate::recognize;
use crate::scalar::Scalar;

/// Tolerance for linear-equation and Riccati-link checks.
pub const LINEAR_TOL: f64 = 1e-10;
/// Tolerance for the nonlinear input equations.
pub const INPUT_TOL: f64 = 1e-8;
/// Tolerance for coefficient compatibility conditions.
pub const COMPAT_TOL: f64 = 1e-6;

/// Sign in front of `aQ` in the Riccati link.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RiccatiSign {
    #[default]
    Upper,
    Lower,
}

impl RiccatiSign {
    pub fn sign(self) -> f64 {
        match self {
            RiccatiSign::Upper => 1.0,
            RiccatiSign::Lower => -1.0,
        }
    }
}

fn cfield(c: Complex64) -> ScalarField {
    if c.im == 0.0 {
        ScalarField::constant(c.re)
    } else {
        ScalarField::complex(c.re, c.im)
    }
}

fn is_complex(fields: &[&ScalarField], consts: &[Complex64]) -> bool {
    consts.iter().any(|c| c.im != 0.0) || fields.iter().any(|f| f.has_complex_constants())
}

fn check(eq: &Equation, u: &ScalarField, id: &str, grid: &GridSpec, tol: f64, complex: bool) -> Result<ResidualReport> {
    let opts = GridOptions { tol, ..GridOptions::default() };
    if complex {
        residual_grid::<Complex64>(eq, u, id, grid, opts)
    } else {
        residual_grid::<f64>(eq, u, id, grid, opts)
    }
}

fn require(report: &ResidualReport, what: &str) -> Result<()> {
    if report.pass {
        Ok(())
    } else {
        Err(Error::PreconditionFailure(format!(
            "{what}: scaled residual {:.3e} over {} points (tolerance {:.0e})",
            report.max_scaled, report.evaluated, report.tol
        )))
    }
}

/// Grid report of `Σ terms = 0` with each term a field, evaluated in the
/// requested mode.
fn terms_report(name: &str, terms: &[ScalarField], grid: &GridSpec, tol: f64, complex: bool) -> Result<ResidualReport> {
    fn run<S: Scalar>(name: &str, terms: &[ScalarField], grid: &GridSpec, tol: f64) -> Result<ResidualReport> {
        let opts = GridOptions { tol, ..GridOptions::default() };
        residual_grid_with::<S, _>(name, "", grid, opts, |x, t, dens| {
            let vals = terms
                .iter()
                .map(|f| f.eval_jet_recording::<S>(x, t, dens).map(|j| j.value))
                .collect::<Result<Vec<S>>>()?;
            Ok(Residual::from_terms(&vals))
        })
    }
    if complex {
        run::<Complex64>(name, terms, grid, tol)
    } else {
        run::<f64>(name, terms, grid, tol)
    }
}

/// Closed-form x-antiderivative when recognized, else quadrature from `x_ref`.
fn antiderivative(g: &ScalarField, x_ref: f64) -> ScalarField {
    if g.is_zero() {
        return ScalarField::zero();
    }
    recognize::antiderivative_x(g).unwrap_or_else(|| g.integrate_x(x_ref))
}

// Constant-coefficient FhNS and its linear partner.

/// Time growth rate `φ3(1 + a1²/(2a²))` of the linear factor.
pub fn growth_rate(a: f64, a1: Complex64, phi3: f64) -> Complex64 {
    phi3 * (1.0 + a1 * a1 / (2.0 * a * a))
}

/// `U_t + (φ3a1/a²)U_x − (φ3/(2a²))U_xx = 0`.
pub fn linear_equation(a: f64, a1: Complex64, phi3: f64) -> Equation {
    Equation::Linear(LinearForm::Thm22 { a, a1, phi3 })
}

/// Grid report of `Q_x + Q(a1 − (±)aQ − U_x/U) = 0`.
pub fn miura_check(
    q: &ScalarField,
    u: &ScalarField,
    a: f64,
    a1: Complex64,
    sign: RiccatiSign,
    grid: &GridSpec,
) -> Result<ResidualReport> {
    fn run<S: Scalar>(
        q: &ScalarField,
        u: &ScalarField,
        a: f64,
        a1: Complex64,
        s: f64,
        grid: &GridSpec,
    ) -> Result<ResidualReport> {
        let opts = GridOptions { tol: LINEAR_TOL, ..GridOptions::default() };
        let a1 = S::from_complex(a1).ok_or_else(|| Error::Domain("imaginary a1 in real mode".into()))?;
        residual_grid_with::<S, _>("miura", "", grid, opts, |x, t, dens| {
            let qj = q.eval_jet_recording::<S>(x, t, dens)?;
            let uj = u.eval_jet_recording::<S>(x, t, dens)?;
            dens.push(uj.value.to_complex());
            if uj.value.norm() < EPS_POLE {
                return Err(Error::Pole { x, t, magnitude: uj.value.norm() });
            }
            let v = qj.value;
            Ok(Residual::from_terms(&[qj.dx, v * a1, -S::from_f64(s * a) * v * v, -v * uj.dx / uj.value]))
        })
    }
    if is_complex(&[q, u], &[a1]) {
        run::<Complex64>(q, u, a, a1, sign.sign(), grid)
    } else {
        run::<f64>(q, u, a, a1, sign.sign(), grid)
    }
}

/// `Q = U e^{−a1x}/(C0 − ∫ a U e^{−a1x} dx)`, the upper-sign solution of the
/// Riccati link.
pub fn riccati_solve_q(u: &ScalarField, a: f64, a1: Complex64, c0: Complex64) -> ScalarField {
    let w = u.clone() * (cfield(-a1) * ScalarField::x()).exp();
    let integral = antiderivative(&(a * w.clone()), 0.0);
    w / (cfield(c0) - integral)
}

/// `u = QUg/(Qe^{a1x} − Ug)`, `g = exp(t φ3 (1 + a1²/(2a²)))`, without checks.
pub fn fhns_from_linear_unchecked(u: &ScalarField, q: &ScalarField, a: f64, a1: Complex64, phi3: f64) -> ScalarField {
    if q.is_zero() {
        return ScalarField::zero();
    }
    let g = (cfield(growth_rate(a, a1, phi3)) * ScalarField::t()).exp();
    let e = (cfield(a1) * ScalarField::x()).exp();
    let ug = u.clone() * g;
    q.clone() * ug.clone() / (q.clone() * e - ug)
}

/// FhNS solution from a linear solution `U` and a Riccati partner `Q`.
/// Checks on `grid` that `U` solves the linear equation, `Q` the FhNS
/// equation and that the pair satisfies the upper-sign link.
pub fn fhns_from_linear(
    u: &ScalarField,
    q: &ScalarField,
    a: f64,
    a1: Complex64,
    phi3: f64,
    grid: &GridSpec,
) -> Result<ScalarField> {
    let complex = is_complex(&[u, q], &[a1]);
    require(&check(&linear_equation(a, a1, phi3), u, "U", grid, LINEAR_TOL, complex)?, "U: linear equation")?;
    require(&check(&Equation::Fhns { a, phi3 }, q, "Q", grid, INPUT_TOL, complex)?, "Q: FhNS equation")?;
    require(&miura_check(q, u, a, a1, RiccatiSign::Upper, grid)?, "Q, U: Riccati link")?;
    Ok(fhns_from_linear_unchecked(u, q, a, a1, phi3))
}

/// `H = −ln U + a1x − (2a² + a1²)tφ3/(2a²)`.
pub fn third_mode_phase(u: &ScalarField, a: f64, a1: Complex64, phi3: f64) -> ScalarField {
    let kt = -(2.0 * a * a + a1 * a1) * phi3 / (2.0 * a * a);
    -u.ln() + cfield(a1) * ScalarField::x() + cfield(kt) * ScalarField::t()
}

/// Grid report of `2a²φ3 + 2a²H_t + φ3H_x² − φ3H_xx = 0`.
pub fn eq8_check(h: &ScalarField, a: f64, phi3: f64, grid: &GridSpec, tol: f64) -> Result<ResidualReport> {
    check(&Equation::Eq8 { a, phi3 }, h, "H", grid, tol, h.has_complex_constants())
}

/// Third-mode ansatz
/// `(e^H M + e^{2H} R − Q)/(1 + Z e^H + e^{2H} Z1 + e^{3H} R)` with
/// `M = −Q²/2`, `Z = −(M + Q²)/Q`, `R = −(2QZ1 + Q³)/2` and `H` the third-mode
/// phase of `U`. `Z1` is free.
pub fn thirdmode_assemble(
    q: &ScalarField,
    u: &ScalarField,
    z1: &ScalarField,
    a: f64,
    a1: Complex64,
    phi3: f64,
    grid: &GridSpec,
) -> Result<ScalarField> {
    if q.is_zero() {
        return Err(Error::DegenerateInput("Q vanishes identically; Z divides by Q".into()));
    }
    let h = third_mode_phase(u, a, a1, phi3);
    require(&eq8_check(&h, a, phi3, grid, INPUT_TOL)?, "H: phase equation")?;
    let e = h.exp();
    let q2 = q.square();
    let m = -0.5 * q2.clone();
    let z = -(m.clone() + q2) / q.clone();
    let r = -(2.0 * q.clone() * z1.clone() + q.powi(3)) / 2.0;
    let num = e.clone() * m + e.square() * r.clone() - q.clone();
    let den = 1.0 + z * e.clone() + e.square() * z1.clone() + e.powi(3) * r;
    Ok(num / den)
}

// Variable coefficients, one-function dressing.

/// Terms of the compatibility condition on `(k0, φ3)` for dressing `M`:
/// `−√2(∫ (−Mφ3k0_t + k0(2φ3M_t + φ3_tM))/(k0√m2) dx)√m2 + 6M²φ3√m2 − 4C0′√m2
///  + 6√2 M_x k0φ3 − √2 M k0_x φ3 + √2 M k0 φ3_x`, `m2 = k0φ3`.
pub fn dressing_compat_terms(
    m: &ScalarField,
    k0: &ScalarField,
    phi3: &ScalarField,
    c0: &ScalarField,
    x_ref: f64,
) -> Vec<ScalarField> {
    let r2 = std::f64::consts::SQRT_2;
    let sm2 = (k0.clone() * phi3.clone()).sqrt();
    let g = (-(m.clone() * phi3.clone() * k0.dt()) + k0.clone() * (2.0 * phi3.clone() * m.dt() + phi3.dt() * m.clone()))
        / (k0.clone() * sm2.clone());
    let integral = antiderivative(&g, x_ref);
    vec![
        -r2 * integral * sm2.clone(),
        6.0 * m.square() * phi3.clone() * sm2.clone(),
        -4.0 * c0.dt() * sm2,
        6.0 * r2 * m.dx() * k0.clone() * phi3.clone(),
        -r2 * m.clone() * k0.dx() * phi3.clone(),
        r2 * m.clone() * k0.clone() * phi3.dx(),
    ]
}

/// Grid report of the compatibility condition with its integration
/// constant and `C0′` eliminated: the condition divided by `√m2` must be
/// constant in `x`, so its x-derivative is checked.
pub fn dressing_compat_check(m: &ScalarField, k0: &ScalarField, phi3: &ScalarField, grid: &GridSpec) -> Result<ResidualReport> {
    let sm2 = (k0.clone() * phi3.clone()).sqrt();
    let mut terms = dressing_compat_terms(m, k0, phi3, &ScalarField::zero(), 0.0);
    terms.remove(2);
    let reduced: Vec<ScalarField> = terms.into_iter().map(|f| (f / sm2.clone()).dx()).collect();
    terms_report("dressing_compat", &reduced, grid, COMPAT_TOL, false)
}

/// `u = e^f M/(1 − e^f)`, `f = C0(t) + ∫ M√φ3/√(2k0) dx`, without checks.
pub fn one_function_dress(
    m: &ScalarField,
    k0: &ScalarField,
    phi3: &ScalarField,
    c0: &ScalarField,
    x_ref: f64,
) -> Result<ScalarField> {
    if m.is_zero() {
        return Ok(ScalarField::zero());
    }
    if let (Some(k), Some(p)) = (k0.as_real_const(), phi3.as_real_const()) {
        if k * p < 0.0 {
            return Err(Error::Domain(format!("k0*phi3 = {} is negative", k * p)));
        }
    }
    let f = c0.clone() + antiderivative(&(m.clone() * phi3.sqrt() / (2.0 * k0.clone()).sqrt()), x_ref);
    let e = f.exp();
    Ok(e.clone() * m.clone() / (1.0 - e))
}

/// One-function dressing of a solution `M` of the variable-coefficient FhNS
/// equation, after checking `M` and the coefficient compatibility on `grid`.
/// The check does not pin `C0`; the caller verifies the result.
pub fn thm2_3_dress(
    m: &ScalarField,
    k0: &ScalarField,
    phi1: &ScalarField,
    phi3: &ScalarField,
    c0: &ScalarField,
    x_ref: f64,
    grid: &GridSpec,
) -> Result<ScalarField> {
    let eq = Equation::FhnsVar { k0: k0.clone(), phi1: phi1.clone(), phi3: phi3.clone() };
    require(&check(&eq, m, "M", grid, INPUT_TOL, false)?, "M: FhNS equation")?;
    require(&dressing_compat_check(m, k0, phi3, grid)?, "k0, phi3: dressing compatibility")?;
    one_function_dress(m, k0, phi3, c0, x_ref)
}

// Variable coefficients, linear correspondence.

/// Which coefficient compatibility to impose.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Compat {
    /// `Q_x = (−2√(2φ3k0)(UQ)² − 4k0UQ(φ1U − U_x))/(4k0U²)`.
    First,
    /// `Q_x = (−2√k0 UQ − 2UQ²φ3 + 2√k0 QU_x)/(√(2k0) U)`.
    Second,
}

pub fn linear_compat_terms(
    q: &ScalarField,
    u: &ScalarField,
    k0: &ScalarField,
    phi1: &ScalarField,
    phi3: &ScalarField,
    which: Compat,
) -> Vec<ScalarField> {
    let (q, u, k0) = (q.clone(), u.clone(), k0.clone());
    match which {
        Compat::First => {
            let den = 4.0 * k0.clone() * u.square();
            vec![
                q.dx(),
                2.0 * (2.0 * phi3.clone() * k0.clone()).sqrt() * (u.clone() * q.clone()).square() / den.clone(),
                4.0 * k0 * u.clone() * q * (phi1.clone() * u.clone() - u.dx()) / den,
            ]
        }
        Compat::Second => {
            let den = (2.0 * k0.clone()).sqrt() * u.clone();
            let sk = k0.sqrt();
            vec![
                q.dx(),
                2.0 * sk.clone() * u.clone() * q.clone() / den.clone(),
                2.0 * u.clone() * q.square() * phi3.clone() / den.clone(),
                -2.0 * sk * q * u.dx() / den,
            ]
        }
    }
}

pub fn linear_compat_check(
    q: &ScalarField,
    u: &ScalarField,
    k0: &ScalarField,
    phi1: &ScalarField,
    phi3: &ScalarField,
    which: Compat,
    grid: &GridSpec,
) -> Result<ResidualReport> {
    let name = match which {
        Compat::First => "first_compat",
        Compat::Second => "second_compat",
    };
    terms_report(name, &linear_compat_terms(q, u, k0, phi1, phi3, which), grid, COMPAT_TOL, false)
}

/// `u = QU/(Q e^{∫φ1 dx} − U)`, without checks.
pub fn fhns_from_potential_pair(q: &ScalarField, u: &ScalarField, phi1: &ScalarField, x_ref: f64) -> ScalarField {
    if q.is_zero() {
        return ScalarField::zero();
    }
    let e = antiderivative(phi1, x_ref).exp();
    q.clone() * u.clone() / (q.clone() * e - u.clone())
}

/// FhNS solution from a solution `U` of the potential linear equation and
/// a variable-coefficient FhNS solution `Q`. The linear equation is checked
/// first, then `Q`, then the chosen compatibility condition.
#[allow(clippy::too_many_arguments)]
pub fn thm2_4_from_linear(
    q: &ScalarField,
    u: &ScalarField,
    k0: &ScalarField,
    phi1: &ScalarField,
    phi3: &ScalarField,
    which: Compat,
    x_ref: f64,
    grid: &GridSpec,
) -> Result<ScalarField> {
    let lin = Equation::Linear(LinearForm::thm24(k0.clone(), phi1.clone(), x_ref));
    require(&check(&lin, u, "U", grid, INPUT_TOL, false)?, "U: linear equation")?;
    let eq = Equation::FhnsVar { k0: k0.clone(), phi1: phi1.clone(), phi3: phi3.clone() };
    require(&check(&eq, q, "Q", grid, INPUT_TOL, false)?, "Q: FhNS equation")?;
    let what = match which {
        Compat::First => "Q, U: first compatibility",
        Compat::Second => "Q, U: second compatibility",
    };
    require(&linear_compat_check(q, u, k0, phi1, phi3, which, grid)?, what)?;
    Ok(fhns_from_potential_pair(q, u, phi1, x_ref))
}

// Modified FKPP.

/// `u = (2k0/h2) ∂x ln U`.
pub fn colehopf_fkpp(u: &ScalarField, k0: f64, h2: f64) -> ScalarField {
    (2.0 * k0 / h2) * u.dx() / u.clone()
}

/// Parameters of `u_t − k0u_xx − (h1 + h2u)u_x + φ1u + φ2u² = 0` with
/// `h1 = −2k0φ2/h2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fkpp {
    pub k0: f64,
    pub h2: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl Fkpp {
    pub fn coefficients(&self) -> crate::PdeCoefficients {
        crate::PdeCoefficients::fkpp_modified(self.k0, self.h2, self.phi1, self.phi2)
    }

    pub fn equation(&self) -> Equation {
        Equation::General(self.coefficients())
    }

    /// `α = φ2/h2`.
    pub fn alpha(&self) -> f64 {
        self.phi2 / self.h2
    }

    /// `C1(t) = c1 − φ1 t`.
    pub fn c1(&self, c1: f64) -> ScalarField {
        c1 - self.phi1 * ScalarField::t()
    }

    /// Potential `r = exp(2αx + C1(t))`.
    pub fn potential(&self, c1: f64) -> ScalarField {
        (2.0 * self.alpha() * ScalarField::x() + self.c1(c1)).exp()
    }

    /// `U_t − rU − k0U_xx = 0`.
    pub fn linear(&self, c1: f64) -> Equation {
        Equation::Linear(LinearForm::FkppPotential { k0: self.k0, r: self.potential(c1) })
    }

    /// Similarity variable `z = exp(αx + C1(t)/2)`.
    pub fn z(&self, c1: f64) -> ScalarField {
        (self.alpha() * ScalarField::x() + 0.5 * self.c1(c1)).exp()
    }

    /// `k0α²(z v'' + v') + z v + (φ1/2) v' = 0`, solved by `v` when
    /// `U = v(z)` solves the linear equation.
    pub fn ode(&self) -> LinearOde2 {
        let ka = self.k0 * self.alpha() * self.alpha();
        LinearOde2 { a: [0.0, ka], b: [ka + 0.5 * self.phi1, 0.0], c: [0.0, 1.0] }
    }

    /// `U = v(z(x, t))` with `v(z0) = v0`, `v'(z0) = dv0`, integrated at
    /// `tol` over the `z`-range covered by `grid`.
    pub fn linear_solution(&self, c1: f64, z0: f64, v0: f64, dv0: f64, grid: &GridSpec, tol: f64) -> Result<ScalarField> {
        if self.alpha() == 0.0 || self.k0 == 0.0 {
            return Err(Error::PreconditionFailure("similarity reduction needs phi2 != 0 and k0 != 0".into()));
        }
        let z = self.z(c1);
        let corners = [
            (grid.x_min, grid.t_min),
            (grid.x_min, grid.t_max),
            (grid.x_max, grid.t_min),
            (grid.x_max, grid.t_max),
        ];
        let zs = corners.iter().map(|&(x, t)| z.eval_real(x, t)).collect::<Result<Vec<f64>>>()?;
        let lo = zs.iter().copied().fold(f64::INFINITY, f64::min).min(z0) * 0.9;
        let hi = zs.iter().copied().fold(0.0, f64::max).max(z0) * 1.1;
        let sol = OdeSolution::new(self.ode(), z0, v0, dv0, lo, hi, tol)?;
        Ok(ScalarField::ode(Arc::new(sol), 0, z))
    }

    /// Cole–Hopf map after checking that `U` solves the potential equation.
    pub fn solve(&self, u: &ScalarField, c1: f64, grid: &GridSpec) -> Result<ScalarField> {
        require(&check(&self.linear(c1), u, "U", grid, INPUT_TOL, false)?, "U: potential linear equation")?;
        Ok(colehopf_fkpp(u, self.k0, self.h2))
    }
}

/// Heat kernel `(t + t0)^{−1/2} exp(−(x − x0)²/(4k0(t + t0)))`.
pub fn heat_kernel(k0: f64, t0: f64, x0: f64) -> ScalarField {
    let s = ScalarField::t() + t0;
    (s.clone()).powf(-0.5) * (-(ScalarField::x() - x0).square() / (4.0 * k0 * s)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{q_2_55, u_2_55};

    fn grid() -> GridSpec {
        GridSpec::new(-3.0, 3.0, 31, 0.0, 1.0, 6).unwrap()
    }

    #[test]
    fn riccati_of_pure_exponential() {
        // U = e^{a1 x}: Q = 1/(C0 − a x).
        let (a, a1, c0) = (1.3, Complex64::new(0.4, 0.0), Complex64::new(5.0, 0.0));
        let u = (0.4 * ScalarField::x()).exp();
        let q = riccati_solve_q(&u, a, a1, c0);
        for &x in &[-2.0, 0.0, 1.5] {
            let want = 1.0 / (5.0 - a * x);
            assert!((q.eval_real(x, 0.3).unwrap() - want).abs() < 1e-14);
        }
        assert!(miura_check(&q, &u, a, a1, RiccatiSign::Upper, &grid()).unwrap().pass);
    }

    #[test]
    fn mismatched_pair_fails_link() {
        let a = 1.0;
        let a1 = Complex64::new(-a, 0.0);
        let u = u_2_55(a, 1.0) + 0.3 * (a * ScalarField::x()).exp();
        let r = miura_check(&q_2_55(a, 1.0), &u, a, a1, RiccatiSign::Upper, &grid()).unwrap();
        assert!(!r.pass);
        let z = miura_check(&ScalarField::zero(), &u, a, a1, RiccatiSign::Upper, &grid()).unwrap();
        assert_eq!(z.max_abs, 0.0);
    }

    #[test]
    fn zero_q_is_degenerate() {
        let r = thirdmode_assemble(&ScalarField::zero(), &u_2_55(1.0, 1.0), &ScalarField::zero(), 1.0, Complex64::new(-1.0, 0.0), 1.0, &grid());
        assert!(matches!(r, Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn heat_kernel_maps_to_rational_field() {
        let (k0, h2, t0) = (0.7, 1.5, 0.5);
        let u = colehopf_fkpp(&heat_kernel(k0, t0, 0.0), k0, h2);
        for &(x, t) in &[(0.3, 0.2), (-1.0, 1.0)] {
            let want = -x / (h2 * (t + t0));
            assert!((u.eval_real(x, t).unwrap() - want).abs() < 1e-13);
        }
    }
}
