use approx::assert_relative_eq;
use rdress::catalog::{ex3_u, kink_m2, kink_q2, phase_kink_pair2, u2};
use rdress::dressing::dress;
use rdress::singular::first_singular_time;
use rdress::{Catalog, Exec, GridSpec, Status};

fn grid() -> GridSpec {
    GridSpec::new(-8.0, 8.0, 81, 0.0, 2.0, 21).unwrap()
}

#[test]
fn printed_solutions_verify() {
    let ids = [
        "fhns_kink_M",
        "fhns_kink_Q",
        "fhns_M2",
        "fhns_Q2",
        "fhns_u1",
        "fhns_u2",
        "fhns_u2_dressed",
        "fhns_u3",
        "fhns_two_param",
        "fhns_diamond_out",
        "lin_pair_2_55",
        "lin_pair_2_55_Q",
        "fhns_2_56",
        "fhns_2_58",
        "fhns_2_59",
        "ex2_u",
        "ex4_u",
    ];
    let mut cat = Catalog::builtin();
    for v in cat.verify(Some(&ids), &grid(), 1e-9, Exec::default()).unwrap() {
        assert!(v.report.pass, "{}: {}", v.id, v.report.summary());
        assert!(matches!(v.status, Status::Verified | Status::ComplexValued));
    }
}

#[test]
fn complex_linear_partners_are_flagged_complex() {
    let mut cat = Catalog::builtin();
    for v in cat.verify(Some(&["lin_2_57", "lin_2_60"]), &grid(), 1e-9, Exec::default()).unwrap() {
        assert_eq!(v.status, Status::ComplexValued, "{}", v.report.summary());
    }
}

#[test]
fn printed_diffusion_coefficient_fails() {
    let mut cat = Catalog::builtin();
    let v = cat.verify(Some(&["lin_pair_2_55_as_printed"]), &grid(), 1e-9, Exec::default()).unwrap();
    assert_eq!(v[0].status, Status::UnverifiedAsPrinted);
    assert!(v[0].report.max_scaled > 1e-2);
}

#[test]
fn printed_phi1_fails_its_condition() {
    let mut cat = Catalog::builtin();
    let v = cat.verify(Some(&["varcoef_phi1"]), &grid(), 1e-9, Exec::default()).unwrap();
    assert_eq!(v[0].status, Status::UnverifiedAsPrinted);
}

#[test]
fn every_record_gets_a_status() {
    let mut cat = Catalog::builtin();
    let coarse = GridSpec::new(-5.0, 5.0, 21, 0.0, 1.0, 6).unwrap();
    let rows = cat.verify_all(&coarse, Exec::default()).unwrap();
    assert_eq!(rows.len(), cat.list().len());
    assert!(cat.records().iter().all(|r| r.status != Status::Pending));
    let ids: Vec<_> = rows.iter().map(|v| v.id.clone()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn printed_u2_is_minus_the_dressed_field() {
    let (a, p3) = (1.0, 1.0);
    let d = dress(&kink_m2(a, -1.5 * p3, 0.0), &kink_q2(a, 0.0), &phase_kink_pair2(a, p3, 0.0, 0.0));
    let printed = u2(a, p3, 0.0, 0.0);
    for &(x, t) in &[(-3.0, 0.1), (0.4, 0.9), (2.5, 1.7)] {
        assert_relative_eq!(printed.eval_real(x, t).unwrap(), -d.eval_real(x, t).unwrap(), max_relative = 1e-12);
    }
}

#[test]
fn json_round_trip_preserves_values() {
    let cat = Catalog::builtin();
    let back = Catalog::load_json(&cat.dump_json().unwrap()).unwrap();
    let orig = cat.entries().unwrap();
    assert_eq!(back.len(), orig.len());
    for (a, b) in orig.iter().zip(&back) {
        assert_eq!(a.id, b.id);
        assert_eq!(a.params, b.params);
        assert_eq!(a.expression.to_sexpr(), b.expression.to_sexpr());
        for &(x, t) in &[(0.3, 0.2), (-1.1, 0.7)] {
            let (u, v) = (a.expression.eval_complex(x, t), b.expression.eval_complex(x, t));
            if let (Ok(u), Ok(v)) = (u, v) {
                assert_eq!(u, v, "{}", a.id);
            }
        }
    }
}

#[test]
fn unknown_ids_and_params() {
    let cat = Catalog::builtin();
    assert!(matches!(cat.get("nope"), Err(rdress::Error::UnknownId(_))));
    assert!(cat.get("fhns_u1").unwrap().params_with(&[("zz", 1.0)]).is_err());
}

/// The denominator `1 − y + e^{−t}y²`, `y = e^{−x/2}`, first has a real root
/// when `1 − 4e^{−t} = 0`, at `y = 2`.
#[test]
fn ex3_singular_time() {
    let ev = first_singular_time(&ex3_u(1.0, -1.0), (-10.0, 10.0), (0.0, 3.0), 801, 301).unwrap().unwrap();
    assert_relative_eq!(ev.t, 4f64.ln(), epsilon = 1e-6);
    assert_relative_eq!(ev.x, -2.0 * 2f64.ln(), epsilon = 1e-3);
    assert!(first_singular_time(&ex3_u(1.0, -1.0), (-10.0, 10.0), (0.0, 1.3), 401, 131).unwrap().is_none());
}
