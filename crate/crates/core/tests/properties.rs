use num_complex::Complex64;
use proptest::prelude::*;
use rdress::catalog::kink_m;
use rdress::dressing::{diamond, FamilyMember};
use rdress::equations::{fd_residual_general, residual_general, residual_linear_parabolic, GridOptions};
use rdress::linearize::{colehopf_fkpp, heat_kernel, miura_check, riccati_solve_q, RiccatiSign};
use rdress::{Equation, Exec, GridSpec, LinearForm, PdeCoefficients, ScalarField};

fn x() -> ScalarField {
    ScalarField::x()
}

fn t() -> ScalarField {
    ScalarField::t()
}

/// Smooth, bounded-growth expressions in `x` and `t`.
fn smooth_field() -> impl Strategy<Value = ScalarField> {
    let leaf = prop_oneof![
        Just(x()),
        Just(t()),
        (-2.0..2.0f64).prop_map(ScalarField::constant),
        (-1.5..1.5f64, -1.5..1.5f64).prop_map(|(a, b)| a * x() + b * t()),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            inner.clone().prop_map(|a| a.sin()),
            inner.clone().prop_map(|a| a.tanh().exp()),
            inner.clone().prop_map(|a| (1.0 + a.square()).sqrt()),
            inner.prop_map(|a| (2.0 + a.cos()).recip()),
        ]
    })
}

fn coefficients() -> impl Strategy<Value = PdeCoefficients> {
    prop::collection::vec(-1.0..1.0f64, 12).prop_map(|v| PdeCoefficients {
        b1: v[0].into(),
        b2: v[1].into(),
        h1: v[2].into(),
        h2: v[3].into(),
        h3: v[4].into(),
        g0: v[5].into(),
        k0: v[6].into(),
        k1: v[7].into(),
        phi: [v[8].into(), v[9].into(), v[10].into(), v[11].into()],
    })
}

fn special_coefficients() -> impl Strategy<Value = PdeCoefficients> {
    coefficients().prop_map(|mut c| {
        c.b2 = 0.0.into();
        c.h3 = 0.0.into();
        c.g0 = 0.0.into();
        c.k1 = 0.0.into();
        c.phi[3] = 0.0.into();
        c
    })
}

fn close(a: f64, b: f64, tol: f64, scale: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + scale)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jet_matches_finite_differences(f in smooth_field(), px in -1.0..1.0f64, pt in -1.0..1.0f64) {
        let j = f.eval_jet::<f64>(px, pt).unwrap();
        let g = |x: f64, t: f64| f.eval_real(x, t).unwrap();
        let h = 1e-4;
        let fx = (g(px + h, pt) - g(px - h, pt)) / (2.0 * h);
        let ft = (g(px, pt + h) - g(px, pt - h)) / (2.0 * h);
        let h2 = 1e-3;
        let fxx = (g(px + h2, pt) - 2.0 * g(px, pt) + g(px - h2, pt)) / (h2 * h2);
        let fxt = (g(px + h2, pt + h2) - g(px + h2, pt - h2) - g(px - h2, pt + h2) + g(px - h2, pt - h2)) / (4.0 * h2 * h2);
        let s = j.max_norm();
        prop_assert!(close(j.dx, fx, 1e-5, s), "dx {} vs {}", j.dx, fx);
        prop_assert!(close(j.dt, ft, 1e-5, s), "dt {} vs {}", j.dt, ft);
        prop_assert!(close(j.dxx, fxx, 1e-4, s), "dxx {} vs {}", j.dxx, fxx);
        prop_assert!(close(j.dxt, fxt, 1e-4, s), "dxt {} vs {}", j.dxt, fxt);
    }

    #[test]
    fn symbolic_derivatives_match_jets(f in smooth_field(), px in -1.0..1.0f64, pt in -1.0..1.0f64) {
        let j = f.eval_jet::<f64>(px, pt).unwrap();
        let s = j.max_norm();
        prop_assert!(close(f.dx().eval_real(px, pt).unwrap(), j.dx, 1e-12, s));
        prop_assert!(close(f.dt().eval_real(px, pt).unwrap(), j.dt, 1e-12, s));
        prop_assert!(close(f.dx().dx().eval_real(px, pt).unwrap(), j.dxx, 1e-12, s));
    }

    #[test]
    fn real_fields_have_no_imaginary_part(f in smooth_field(), px in -1.0..1.0f64, pt in -1.0..1.0f64) {
        let c = f.eval_jet::<Complex64>(px, pt).unwrap();
        let r = f.eval_jet::<f64>(px, pt).unwrap();
        for (z, v) in [(c.value, r.value), (c.dx, r.dx), (c.dt, r.dt), (c.dxx, r.dxx), (c.dxt, r.dxt)] {
            prop_assert!(z.im.abs() <= 1e-13);
            prop_assert!(close(z.re, v, 1e-13, v.abs()));
        }
    }

    #[test]
    fn sexpr_round_trip(f in smooth_field(), px in -1.0..1.0f64, pt in -1.0..1.0f64) {
        let g = ScalarField::from_sexpr(&f.to_sexpr()).unwrap();
        prop_assert_eq!(f.eval_real(px, pt).unwrap(), g.eval_real(px, pt).unwrap());
    }

    #[test]
    fn fd_residual_agrees_with_jet_residual(
        c in coefficients(), f in smooth_field(), px in -0.8..0.8f64, pt in -0.8..0.8f64,
    ) {
        let jet = residual_general::<f64>(&c, &f, px, pt).unwrap();
        let fd = fd_residual_general(&c, &|x, t| f.eval_real(x, t).unwrap(), px, pt, 1e-2).unwrap();
        let s = f.eval_jet::<f64>(px, pt).unwrap().max_norm();
        prop_assert!(close(jet, fd, 1e-5, s * s * s * s), "{} vs {}", jet, fd);
    }

    #[test]
    fn special_form_equals_general(c in special_coefficients(), f in smooth_field(), px in -1.0..1.0f64, pt in -1.0..1.0f64) {
        let mut d = Vec::new();
        let sp = Equation::special(c.clone()).unwrap().residual::<f64>(&f, px, pt, &mut d).unwrap().value;
        let ge = Equation::General(c).residual::<f64>(&f, px, pt, &mut d).unwrap().value;
        prop_assert_eq!(sp, ge);
    }

    #[test]
    fn linear_forms_are_linear(
        u1 in smooth_field(), u2 in smooth_field(),
        al in -2.0..2.0f64, be in -2.0..2.0f64,
        a in 0.5..2.0f64, a1 in -1.0..1.0f64, phi3 in -1.0..1.0f64, k0 in 0.1..2.0f64,
        px in -1.0..1.0f64, pt in -1.0..1.0f64,
    ) {
        let forms = [
            LinearForm::Thm22 { a, a1: Complex64::new(a1, 0.0), phi3 },
            LinearForm::thm24(ScalarField::constant(k0), ScalarField::constant(phi3) + 0.3 * x(), 0.0),
            LinearForm::FkppPotential { k0, r: (x() * a1).exp() },
        ];
        let comb = al * u1.clone() + be * u2.clone();
        for form in &forms {
            let l = |u: &ScalarField| residual_linear_parabolic::<f64>(u, form, px, pt).unwrap();
            let (r1, r2, rc) = (l(&u1), l(&u2), l(&comb));
            prop_assert!(close(rc, al * r1 + be * r2, 1e-10, (al * r1).abs() + (be * r2).abs()));
        }
    }

    #[test]
    fn fhns_kinks_have_small_fd_residual(a in 0.5..2.0f64, phi3 in 0.2..2.0f64, m0 in -2.0..2.0f64, px in -3.0..3.0f64, pt in 0.0..1.0f64) {
        let u = kink_m(a, -1.5 * phi3, m0);
        let c = PdeCoefficients::fhns(a, phi3);
        let r = fd_residual_general(&c, &|x, t| u.eval_real(x, t).unwrap(), px, pt, 1e-2).unwrap();
        prop_assert!(r.abs() <= 1e-6 * (1.0 + phi3 * a.powi(4)), "{}", r);
    }

    #[test]
    fn diamond_is_associative_and_commutative(
        a in 0.5..2.0f64, phi3 in -1.0..1.0f64,
        cs in prop::collection::vec(-3.0..3.0f64, 6),
    ) {
        let m = |i: usize| FamilyMember { a, phi3, c1: cs[2 * i], c2: cs[2 * i + 1] };
        let left = diamond(&diamond(&m(0), &m(1)).unwrap(), &m(2)).unwrap();
        let right = diamond(&m(0), &diamond(&m(1), &m(2)).unwrap()).unwrap();
        prop_assert!((left.c1 - right.c1).abs() <= 1e-12 && (left.c2 - right.c2).abs() <= 1e-12);
        let ab = diamond(&m(0), &m(1)).unwrap();
        let ba = diamond(&m(1), &m(0)).unwrap();
        prop_assert_eq!(ab, ba);
    }
}

fn small_grid() -> GridSpec {
    GridSpec::new(-3.0, 3.0, 25, 0.0, 0.5, 5).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    /// `U = Σ c_i exp(k_i x + ω(k_i) t)` solves the linear partner; the
    /// Riccati solution built from it satisfies the link.
    #[test]
    fn riccati_round_trip(
        modes in prop::collection::vec((0.1..1.0f64, -1.0..1.5f64), 1..4),
        a in -2.0..-0.5f64, phi3 in 0.2..1.5f64,
    ) {
        let a1 = -1.0;
        let omega = |k: f64| -phi3 * a1 / (a * a) * k + phi3 / (2.0 * a * a) * k * k;
        let u = modes.iter().fold(ScalarField::zero(), |acc, &(c, k)| acc + c * (k * x() + omega(k) * t()).exp());
        let a1c = Complex64::new(a1, 0.0);
        let rep = rdress::equations::residual_grid::<f64>(&rdress::linearize::linear_equation(a, a1c, phi3), &u, "u", &small_grid(), GridOptions::default()).unwrap();
        prop_assert!(rep.pass, "{}", rep.summary());
        let q = riccati_solve_q(&u, a, a1c, Complex64::new(50.0, 0.0));
        let m = miura_check(&q, &u, a, a1c, RiccatiSign::Upper, &small_grid()).unwrap();
        prop_assert!(m.pass, "{}", m.summary());
    }
}

/// Positive heat solutions, `U_t = k0U_xx`.
fn heat_solution(k0: f64, which: usize, p: f64) -> ScalarField {
    match which {
        0 => heat_kernel(k0, 1.0 + p.abs(), p),
        1 => 1.0 + heat_kernel(k0, 0.5, -p),
        2 => (p * x() + k0 * p * p * t()).exp() + (-x() + k0 * t()).exp(),
        3 => x().square() + 2.0 * k0 * t() + 1.0 + p * p,
        _ => 2.0 + (-k0 * t()).exp() * (x() + p).cos(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    #[test]
    fn cole_hopf_gives_burgers(which in 0usize..5, k0 in 0.2..2.0f64, h2 in prop_oneof![-2.0..-0.5f64, 0.5..2.0f64], p in -1.0..1.0f64) {
        let u = colehopf_fkpp(&heat_solution(k0, which, p), k0, h2);
        let burgers = PdeCoefficients { k0: k0.into(), h2: h2.into(), ..PdeCoefficients::default() };
        let opts = GridOptions { exec: Exec::Sequential, ..GridOptions::default() };
        let rep = rdress::equations::residual_grid::<f64>(&Equation::General(burgers), &u, "u", &small_grid(), opts).unwrap();
        prop_assert!(rep.pass, "{}", rep.summary());
    }
}
