use std::f64::consts::{FRAC_PI_2, PI};

use liouville::geometry::Mobius;
use liouville::polygon::*;
use liouville::schwarzian::*;
use proptest::prelude::*;

mod common;
use common::c;

fn lune() -> PolygonalMetricSpec {
    PolygonalMetricSpec::new(SchwarzianSpec::poles(vec![Pole { q: 0.0, alpha: 0.375, beta: 0.0 }]))
}

fn two_pole(beta: f64) -> PolygonalMetricSpec {
    PolygonalMetricSpec::new(SchwarzianSpec::poles(vec![
        Pole { q: -1.0, alpha: 0.25, beta },
        Pole { q: 1.0, alpha: 0.25, beta: -beta },
    ]))
}

#[test]
fn lune_has_two_right_angles() {
    let r = polygon_from_spec(&lune()).unwrap();
    assert_eq!(r.polygon.arcs.len(), 2);
    assert_eq!(r.polygon.vertices.len(), 2);
    for v in &r.polygon.vertices {
        assert!((v.measured_angle - FRAC_PI_2).abs() < 1e-6, "{v:?}");
        assert!((v.angle - FRAC_PI_2).abs() < 1e-15);
    }
    assert!(r.closure_residual < 1e-8 && r.fit_residual < 1e-8);
    assert!(r.polygon.invariant_violations(1e-6).is_empty());
}

#[test]
fn vertex_angles_follow_the_residues() {
    for beta in [0.0, 0.1, 0.2] {
        let spec = two_pole(beta);
        let r = polygon_from_spec(&spec).unwrap();
        assert_eq!(r.polygon.arcs.len(), 3);
        for v in &r.polygon.vertices {
            let want = vertex_angle(v.alpha).unwrap();
            assert!((v.measured_angle - want).abs() < 1e-3, "beta {beta}: {v:?}");
        }
        // π·sqrt(1 − 2α) at the finite poles
        assert!((r.polygon.vertices[0].angle - PI * (0.5f64).sqrt()).abs() < 1e-12);
        for (b, k) in r.boundary_constants.iter().zip(&r.curvature_constants) {
            assert!((b - k).abs() < 1e-4, "{b} vs {k}");
        }
    }
}

#[test]
fn reflex_angles_are_compared_folded() {
    let spec = PolygonalMetricSpec::new(SchwarzianSpec::poles(vec![
        Pole { q: -1.0, alpha: -0.5, beta: 0.0 },
        Pole { q: 1.0, alpha: 0.25, beta: 0.0 },
    ]));
    let r = polygon_from_spec(&spec).unwrap();
    let v = &r.polygon.vertices[0];
    assert!((v.angle - PI * 2f64.sqrt()).abs() < 1e-12);
    assert!((v.measured_angle - (2.0 * PI - v.angle)).abs() < 1e-6, "{v:?}");
    assert!(r.polygon.vertices.iter().all(|v| v.angle_deviation() < 1e-6));
}

#[test]
fn lune_certificate_is_full() {
    let spec = lune();
    let r = polygon_from_spec(&spec).unwrap();
    let g = spec.developing_map().unwrap();
    let cert = alexandrov_partial_check(&g, &r.polygon, 24);
    assert!(cert.local_diffeomorphism && cert.boundary_regular, "{cert:?}");
    assert!(cert.full, "{cert:?}");
    assert_eq!(cert.self_crossings, 0);
}

#[test]
fn mobius_transform_preserves_structure() {
    let r = polygon_from_spec(&two_pole(0.1)).unwrap();
    let m = Mobius::new(c(1.0, 0.5), c(0.3, 0.0), c(-0.2, 0.1), c(1.0, 0.0)).unwrap();
    let t = r.polygon.transform(&m).unwrap();
    assert!(t.closure_residual() < 1e-8);
    assert!(t.invariant_violations(1e-6).is_empty());
    for (a, b) in r.polygon.vertices.iter().zip(&t.vertices) {
        assert!(m.apply(a.point).chordal_distance(&b.point) < 1e-12);
    }
}

#[test]
fn gauge_moves_the_polygon() {
    let m = Mobius::new(c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
    let plain = polygon_from_spec(&two_pole(0.1)).unwrap();
    let gauged = polygon_from_spec(&two_pole(0.1).with_gauge(m)).unwrap();
    for (a, b) in plain.polygon.vertices.iter().zip(&gauged.polygon.vertices) {
        assert!(m.apply(a.point).chordal_distance(&b.point) < 1e-8);
        assert!((a.measured_angle - b.measured_angle).abs() < 1e-6);
    }
}

#[test]
fn inadmissible_specs_are_rejected() {
    let bad = PolygonalMetricSpec::new(SchwarzianSpec::poles(vec![Pole { q: 0.0, alpha: 0.7, beta: 0.0 }]));
    assert!(matches!(polygon_from_spec(&bad), Err(liouville::Error::ConstraintViolation(_))));
    assert!(fit_accessory([0.0, 1.0], [0.6, 0.2], 0.3).is_err());
    assert!(fit_accessory([1.0, 1.0], [0.2, 0.2], 0.3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn accessory_fit_hits_the_target(q1 in -3.0..3.0f64, gap in 0.2..3.0f64, a1 in -1.0..0.5f64, a2 in -1.0..0.5f64, t in -2.0..0.5f64) {
        let fit = fit_accessory([q1, q1 + gap], [a1, a2], t).unwrap();
        let direct = a1 + a2 + (q1 - (q1 + gap)) * fit.beta1;
        prop_assert!((direct - t).abs() < 1e-8);
        prop_assert_eq!(fit.beta2, -fit.beta1);
        prop_assert!(fit.alpha_infinity <= 0.5 + 1e-12);
    }
}
