use std::f64::consts::LN_2;

use approx::assert_abs_diff_eq;
use rdress::catalog::{kink_m, kink_m2, kink_q, kink_q2, phase_kink_pair, phase_kink_pair2, u1, u3};
use rdress::dressing::{
    check_compatibility, check_hamilton_jacobi, compute_h, dress, dress_level2, first_mode, fit_c0_prime, Branch,
    DressingConfig, FamilyMember,
};
use rdress::equations::GridOptions;
use rdress::{Equation, Exec, GridSpec, PdeCoefficients, ScalarField};

fn grid() -> GridSpec {
    GridSpec::new(-6.0, 6.0, 61, 0.0, 1.0, 11).unwrap()
}

fn pts() -> Vec<(f64, f64)> {
    (0..40).map(|i| (-5.0 + 0.25 * i as f64, 0.025 * i as f64)).collect()
}

fn max_diff(a: &ScalarField, b: &ScalarField) -> f64 {
    pts().iter().map(|&(x, t)| (a.eval_real(x, t).unwrap() - b.eval_real(x, t).unwrap()).abs()).fold(0.0, f64::max)
}

#[test]
fn kink_pair_dresses_to_u1() {
    for &(a, p3, m0, q0) in &[(1.0, 1.0, 0.0, 0.0), (0.7, 1.6, -0.5, 1.2)] {
        let c = PdeCoefficients::fhns(a, p3);
        let (m, q) = (kink_m(a, -1.5 * p3, m0), kink_q(a, q0));
        let h = compute_h(&m, &q, &c, &DressingConfig::default()).unwrap();
        assert!(max_diff(&h, &phase_kink_pair(a, p3, m0, q0)) < 1e-12);
        assert!(max_diff(&dress(&m, &q, &h), &u1(a, p3, m0, q0)) < 1e-12);
    }
}

#[test]
fn second_kink_pair_phase() {
    let (a, p3) = (1.2, 0.9);
    let c = PdeCoefficients::fhns(a, p3);
    let h = compute_h(&kink_m2(a, -1.5 * p3, 0.3), &kink_q2(a, -0.4), &c, &DressingConfig::default()).unwrap();
    assert!(max_diff(&h, &phase_kink_pair2(a, p3, 0.3, -0.4)) < 1e-12);
}

#[test]
fn plus_branch_fails_for_kink_pair() {
    let c = PdeCoefficients::fhns(1.0, 1.0);
    let (m, q) = (kink_m(1.0, -1.5, 0.0), kink_q(1.0, 0.0));
    let cfg = DressingConfig::default().with_branch(Branch::Plus);
    let d = first_mode(&m, &q, &c, &cfg, &grid(), GridOptions::default()).unwrap();
    let r = rdress::equations::residual_grid::<f64>(&Equation::Fhns { a: 1.0, phi3: 1.0 }, &d.u, "u", &grid(), GridOptions::default())
        .unwrap();
    assert!(!r.pass);
}

#[test]
fn perturbed_speed_breaks_compatibility() {
    let c = PdeCoefficients::fhns(1.0, 1.0);
    let q = kink_q(1.0, 0.0);
    let cfg = DressingConfig::default();
    let ok = check_compatibility(&kink_m(1.0, -1.5, 0.0), &q, &c, &cfg, &grid(), GridOptions::default()).unwrap();
    assert!(ok.pass);
    let bad = check_compatibility(&kink_m(1.0, -1.4, 0.0), &q, &c, &cfg, &grid(), GridOptions::default()).unwrap();
    assert!(bad.max_scaled > 1e-3);
}

#[test]
fn hamilton_jacobi_rejects_wrong_phase() {
    let c = PdeCoefficients::fhns(1.0, 1.0);
    let (m, q) = (kink_m(1.0, -1.5, 0.0), kink_q(1.0, 0.0));
    let h = compute_h(&m, &q, &c, &DressingConfig::default()).unwrap();
    assert!(check_hamilton_jacobi(&m, &q, &h, &c, &grid(), GridOptions::default()).unwrap().pass);
    let off = 1.1 * h;
    assert!(!check_hamilton_jacobi(&m, &q, &off, &c, &grid(), GridOptions::default()).unwrap().pass);
}

#[test]
fn fitted_c0_prime_vanishes_for_closed_form_pair() {
    let c = PdeCoefficients::fhns(1.0, 1.0);
    let (m, q) = (kink_m(1.0, -1.5, 0.0), kink_q(1.0, 0.0));
    for (_, c0p) in fit_c0_prime(&m, &q, &c, &DressingConfig::default(), &grid(), Exec::default()).unwrap() {
        assert_abs_diff_eq!(c0p, 0.0, epsilon = 1e-12);
    }
}

#[test]
fn second_level_reaches_u3_with_ln2_offset() {
    let (a, p3) = (1.0, 1.0);
    let c = PdeCoefficients::fhns(a, p3);
    let u2d = dress(&kink_m2(a, -1.5 * p3, 0.0), &kink_q2(a, 0.0), &phase_kink_pair2(a, p3, 0.0, 0.0));
    let u1f = u1(a, p3, 0.0, 0.0);
    let cfg = DressingConfig::default().with_c0(LN_2);
    let h = compute_h(&u2d, &u1f, &c, &cfg).unwrap();
    assert!(max_diff(&dress(&u2d, &u1f, &h), &u3(a, p3, 0.0, 0.0, 0.0, 0.0)) < 1e-12);
    let plain = compute_h(&u2d, &u1f, &c, &DressingConfig::default()).unwrap();
    assert!(max_diff(&dress(&u2d, &u1f, &plain), &u3(a, p3, 0.0, 0.0, 0.0, 0.0)) > 1e-3);
}

#[test]
fn level_two_dressing_of_family_members() {
    let c = PdeCoefficients::fhns(1.0, 1.0);
    let f = |c1: f64, c2: f64| FamilyMember { a: 1.0, phi3: 1.0, c1, c2 }.field();
    let (m0, q0, m1, q1) = (f(0.3, -0.2), f(-0.5, 0.4), f(0.1, 0.9), f(-0.7, -0.1));
    let small = GridSpec::new(-6.0, 6.0, 25, 0.0, 1.0, 5).unwrap();
    let l2 = dress_level2([(&m0, &q0), (&m1, &q1)], &c, &DressingConfig::default(), &small, GridOptions::default()).unwrap();
    assert!(l2.residual.pass && l2.residual.evaluated == small.len(), "{}", l2.residual.summary());
    assert!(l2.inner.iter().all(|d| d.compat.pass && d.hj.pass));
}

#[test]
fn dressed_solution_json_round_trip() {
    let c = PdeCoefficients::fhns(1.0, 1.0);
    let (m, q) = (kink_m(1.0, -1.5, 0.0), kink_q(1.0, 0.0));
    let d = first_mode(&m, &q, &c, &DressingConfig::default(), &grid(), GridOptions::default()).unwrap();
    let text = serde_json::to_string(&d).unwrap();
    let back: rdress::dressing::DressedSolution = serde_json::from_str(&text).unwrap();
    assert_eq!(back.u.to_sexpr(), d.u.to_sexpr());
    assert_eq!(back.compat.max_abs, d.compat.max_abs);
}
