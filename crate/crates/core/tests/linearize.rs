use num_complex::Complex64;
use rdress::catalog::{a1_imag, kink_m, q_2_55, u_2_55, u_2_56, u_2_57, u_2_58, u_2_59, u_2_60, varcoef_phi1, varcoef_u};
use rdress::equations::{max_imag_part, residual_grid, GridOptions};
use rdress::linearize::*;
use rdress::{Equation, Error, Exec, GridSpec, LinearForm, ScalarField};

fn grid() -> GridSpec {
    GridSpec::new(-5.0, 5.0, 51, 0.0, 1.0, 11).unwrap()
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn diff_at(a: &ScalarField, b: &ScalarField, x: f64, t: f64) -> f64 {
    (a.eval_complex(x, t).unwrap() - b.eval_complex(x, t).unwrap()).norm()
}

#[test]
fn exponential_pair_satisfies_the_link() {
    let (a, p3) = (1.0, 1.0);
    let (q, u) = (q_2_55(a, 1.0), u_2_55(a, 1.0));
    assert!(miura_check(&q, &u, a, real(-a), RiccatiSign::Upper, &grid()).unwrap().pass);
    assert!(!miura_check(&q, &u, a, real(-a), RiccatiSign::Lower, &grid()).unwrap().pass);
    let w = fhns_from_linear(&u, &q, a, real(-a), p3, &grid()).unwrap();
    assert!(diff_at(&w, &u_2_56(a, p3, 1.0), 0.3, 0.4) < 1e-12);
    assert!(diff_at(&w, &u_2_56(a, p3, 1.0), -2.0, 0.9) < 1e-12);
}

#[test]
fn printed_linear_coefficient_fails_on_exponential_pair() {
    let (a, p3) = (1.0, 1.0);
    let u = u_2_55(a, 1.0);
    let printed = Equation::Linear(LinearForm::Thm22AsPrinted { a, a1: real(-a), phi3: p3 });
    assert!(!residual_grid::<f64>(&printed, &u, "u", &grid(), GridOptions::default()).unwrap().pass);
    let fixed = linear_equation(a, real(-a), p3);
    assert!(residual_grid::<f64>(&fixed, &u, "u", &grid(), GridOptions::default()).unwrap().pass);
}

#[test]
fn imaginary_a1_pipelines_reflect_printed_solutions() {
    let (a, p3) = (1.0, 1.0);
    let ai = a1_imag(a);
    let u57 = u_2_57(a, p3, 1.0);
    let w58 = fhns_from_linear(&u57, &riccati_solve_q(&u57, a, ai, real(2.0)), a, ai, p3, &grid()).unwrap();
    let u60 = u_2_60(a, p3);
    let w59 = fhns_from_linear(&u60, &riccati_solve_q(&u60, a, ai, real(0.0)), a, ai, p3, &grid()).unwrap();
    for &(x, t) in &[(0.3, 0.4), (-1.7, 0.8)] {
        assert!(diff_at(&w58, &(-u_2_58(a, p3, 1.0)), x, t) < 1e-10);
        assert!(diff_at(&w59, &(-u_2_59(a, p3)), x, t) < 1e-10);
    }
    assert!(max_imag_part(&w58, &grid(), Exec::default()).unwrap() < 1e-10);
    assert!(max_imag_part(&w59, &grid(), Exec::default()).unwrap() < 1e-10);
    let h = third_mode_phase(&u60, a, ai, p3);
    assert!(eq8_check(&h, a, p3, &grid(), 1e-10).unwrap().pass);
}

#[test]
fn wrong_inputs_are_rejected() {
    let (a, p3) = (1.0, 1.0);
    let (q, u) = (q_2_55(a, 1.0), u_2_55(a, 1.0));
    let not_linear = u.clone() * ScalarField::x();
    assert!(matches!(fhns_from_linear(&not_linear, &q, a, real(-a), p3, &grid()), Err(Error::PreconditionFailure(_))));
    let other_q = q_2_55(a, 2.0);
    assert!(matches!(fhns_from_linear(&u, &other_q, a, real(-a), p3, &grid()), Err(Error::PreconditionFailure(_))));
}

#[test]
fn third_mode_is_independent_of_z1() {
    let (a, p3) = (1.0, 1.0);
    let (q, u) = (q_2_55(a, 1.0), u_2_55(a, 1.0));
    let base = fhns_from_linear(&u, &q, a, real(-a), p3, &grid()).unwrap();
    for z1 in [ScalarField::zero(), ScalarField::constant(0.8), 0.3 * ScalarField::x().sin()] {
        let tm = thirdmode_assemble(&q, &u, &z1, a, real(-a), p3, &grid()).unwrap();
        for &(x, t) in &[(0.3, 0.4), (-2.0, 0.1), (1.5, 0.9)] {
            assert!(diff_at(&tm, &base, x, t) < 1e-10);
        }
    }
}

#[test]
fn one_function_dressing_of_a_kink() {
    let m = kink_m(1.0, -1.5, 0.4);
    let (half, one) = (ScalarField::constant(0.5), ScalarField::one());
    let eq = Equation::FhnsVar { k0: half.clone(), phi1: one.clone(), phi3: one.clone() };
    let moving = thm2_3_dress(&m, &half, &one, &one, &(1.5 * ScalarField::t()), 0.0, &grid()).unwrap();
    assert!(residual_grid::<f64>(&eq, &moving, "u", &grid(), GridOptions::default()).unwrap().pass);
    let frozen = thm2_3_dress(&m, &half, &one, &one, &ScalarField::zero(), 0.0, &grid()).unwrap();
    assert!(!residual_grid::<f64>(&eq, &frozen, "u", &grid(), GridOptions::default()).unwrap().pass);
}

#[test]
fn negative_diffusion_product_is_a_domain_error() {
    let m = kink_m(1.0, -1.5, 0.0);
    let r = one_function_dress(&m, &ScalarField::constant(-0.5), &ScalarField::one(), &ScalarField::zero(), 0.0);
    assert!(matches!(r, Err(Error::Domain(_))));
}

#[test]
fn printed_variable_coefficient_case() {
    let c2 = 1.0;
    let phi = varcoef_phi1(c2);
    assert!(!dressing_compat_check(&ScalarField::one(), &ScalarField::one(), &phi, &grid()).unwrap().pass);
    let c0 = c2 / (2.0 * 2f64.sqrt()) * ScalarField::t();
    let w = one_function_dress(&ScalarField::one(), &ScalarField::one(), &phi, &c0, 0.0).unwrap();
    let printed = varcoef_u(c2);
    assert!(diff_at(&w, &printed, 0.7, 0.3) < 1e-9);
    assert!(diff_at(&w, &printed, -0.7, 0.3) > 1.0);
}

#[test]
fn first_compatibility_links_to_constant_case() {
    let (a, c1, p3) = (-1.0, 0.7, 1.0);
    let u = u_2_55(a, c1) * (1.5 * ScalarField::t()).exp();
    let q = q_2_55(a, c1);
    let (k0, one) = (ScalarField::constant(0.5), ScalarField::one());
    let w = thm2_4_from_linear(&q, &u, &k0, &one, &one, Compat::First, 0.0, &grid()).unwrap();
    let reference = fhns_from_linear_unchecked(&u_2_55(a, c1), &q, a, real(1.0), p3);
    for &(x, t) in &[(0.3, 0.4), (-2.0, 0.9)] {
        assert!(diff_at(&w, &reference, x, t) < 1e-12);
    }
    let second = thm2_4_from_linear(&q, &u, &k0, &one, &one, Compat::Second, 0.0, &grid());
    assert!(matches!(second, Err(Error::PreconditionFailure(_))));
}

#[test]
fn fkpp_through_the_similarity_ode() {
    for p in [Fkpp { k0: 1.0, h2: 1.0, phi1: 1.0, phi2: 0.5 }, Fkpp { k0: 0.6, h2: 2.0, phi1: 0.4, phi2: -0.8 }] {
        let g = GridSpec::new(-3.0, 3.0, 61, 0.0, 1.0, 11).unwrap();
        let u = p.linear_solution(0.2, 1.0, 1.0, 0.0, &g, 1e-10).unwrap();
        let w = p.solve(&u, 0.2, &g).unwrap();
        let r = residual_grid::<f64>(&p.equation(), &w, "u", &g, GridOptions { tol: 1e-7, ..GridOptions::default() }).unwrap();
        assert!(r.pass && r.evaluated > 0, "{p:?}: {}", r.summary());
    }
}

#[test]
fn fkpp_rejects_non_solutions() {
    let p = Fkpp { k0: 1.0, h2: 1.0, phi1: 1.0, phi2: 0.5 };
    let r = p.solve(&(ScalarField::x().exp() + 2.0), 0.0, &grid());
    assert!(matches!(r, Err(Error::PreconditionFailure(_))));
    let flat = Fkpp { phi2: 0.0, ..p };
    assert!(flat.linear_solution(0.0, 1.0, 1.0, 0.0, &grid(), 1e-10).is_err());
}

#[test]
fn heat_reduction_solves_burgers() {
    let heat = Fkpp { k0: 0.7, h2: 1.5, phi1: 0.0, phi2: 0.0 };
    let w = colehopf_fkpp(&heat_kernel(heat.k0, 0.5, 0.0), heat.k0, heat.h2);
    assert!(residual_grid::<f64>(&heat.equation(), &w, "u", &grid(), GridOptions::default()).unwrap().pass);
}
