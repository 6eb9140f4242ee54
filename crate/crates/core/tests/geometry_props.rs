use liouville::geometry::{circle_through, cross_ratio, ChartJet, ComplexPt, Jet3, Mobius};
use liouville::schwarzian::schwarzian_chart;
use liouville::{Mobius32, Point32};
use num_complex::Complex64;
use proptest::prelude::*;

fn cx() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

fn mobius() -> impl Strategy<Value = Mobius<f64>> {
    (cx(), cx(), cx(), cx())
        .prop_filter("well conditioned", |(a, b, c, d)| (a * d - b * c).norm() > 0.5)
        .prop_map(|(a, b, c, d)| Mobius::new(a, b, c, d).unwrap())
}

fn pt(z: Complex64) -> ComplexPt<f64> {
    ComplexPt::from_cx(z)
}

fn close(a: ComplexPt<f64>, b: ComplexPt<f64>, tol: f64) -> bool {
    a.chordal_distance(&b) <= tol
}

proptest! {
    #[test]
    fn compose_matches_sequential_application(m in mobius(), n in mobius(), z in cx()) {
        let lhs = m.compose(&n).apply(pt(z));
        let rhs = m.apply(n.apply(pt(z)));
        prop_assert!(close(lhs, rhs, 1e-9));
    }

    #[test]
    fn inverse_undoes(m in mobius(), z in cx()) {
        prop_assert!(close(m.inverse().apply(m.apply(pt(z))), pt(z), 1e-9));
        prop_assert!(m.compose(&m.inverse()).distance(&Mobius::identity()) < 1e-9);
    }

    #[test]
    fn cross_ratio_is_invariant(m in mobius(), a in cx(), b in cx(), c in cx(), d in cx()) {
        let zs = [a, b, c, d];
        prop_assume!((0..4).all(|i| (i + 1..4).all(|j| (zs[i] - zs[j]).norm() > 0.1)));
        let before = cross_ratio(pt(a), pt(b), pt(c), pt(d));
        let after = cross_ratio(m.apply(pt(a)), m.apply(pt(b)), m.apply(pt(c)), m.apply(pt(d)));
        prop_assert!(close(before, after, 1e-8));
    }

    #[test]
    fn chordal_distance_is_a_symmetric_bounded_metric(a in cx(), b in cx(), c in cx()) {
        let (a, b, c) = (pt(a), pt(b), pt(c));
        prop_assert!((a.chordal_distance(&b) - b.chordal_distance(&a)).abs() < 1e-15);
        prop_assert!(a.chordal_distance(&b) <= 2.0 + 1e-15);
        prop_assert!(a.chordal_distance(&c) <= a.chordal_distance(&b) + b.chordal_distance(&c) + 1e-12);
        prop_assert!(a.chordal_distance(&ComplexPt::Infinity) > 0.0);
    }

    #[test]
    fn schwarzian_is_mobius_invariant(m in mobius(), z in cx()) {
        // g = e^z + z³/3
        let u = Jet3::variable(z);
        let g = u.exp() + u.powi(3).scale(Complex64::new(1.0 / 3.0, 0.0));
        let s0 = schwarzian_chart(&ChartJet::from_direct(g)).unwrap();
        let s1 = match schwarzian_chart(&m.apply_jet(&ChartJet::from_direct(g))) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        };
        // explicit form: e^z + z² = g', S = (g'''/g')' − ½(g''/g')²
        let (e, z2) = (z.exp(), z * z);
        let (d1, d2, d3) = (e + z2, e + 2.0 * z, e + 2.0);
        let explicit = d3 / d1 - 1.5 * (d2 / d1).powi(2);
        prop_assert!((s0 - explicit).norm() <= 1e-9 * (1.0 + explicit.norm()));
        prop_assert!((s1 - s0).norm() <= 1e-7 * (1.0 + s0.norm()));
    }

    #[test]
    fn circle_through_three_points_follows_mobius(m in mobius(), a in cx(), b in cx(), c in cx()) {
        prop_assume!((a - b).norm() > 0.2 && (b - c).norm() > 0.2 && (a - c).norm() > 0.2);
        let Ok(circ) = circle_through(pt(a), pt(b), pt(c)) else { return Ok(()) };
        let Ok(moved) = circ.transform(&m) else { return Ok(()) };
        for z in [a, b, c] {
            prop_assert!(moved.chordal_distance(m.apply(pt(z))) < 1e-7);
        }
    }
}

#[test]
fn single_precision_aliases() {
    let m = Mobius32::translation(num_complex::Complex32::new(1.0, 2.0));
    let p = m.apply(Point32::new(0.5, 0.5));
    let z = p.finite().unwrap();
    assert!((z.re - 1.5).abs() < 1e-6 && (z.im - 2.5).abs() < 1e-6);
}
