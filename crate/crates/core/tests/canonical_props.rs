use std::f64::consts::PI;

use liouville::canonical::*;
use liouville::geometry::Curvature;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn curvature() -> impl Strategy<Value = Curvature> {
    prop_oneof![Just(Curvature::Spherical), Just(Curvature::Flat), Just(Curvature::Hyperbolic)]
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::Power), Just(Family::Log)]
}

/// `e^v` written out directly from the parameters.
fn density_oracle(p: &CanonicalParams, z: Complex64) -> f64 {
    let k = p.k.value::<f64>();
    let (zeta, dz) = match p.family {
        Family::Power => (z.powf(p.gamma), p.gamma * z.powf(p.gamma - 1.0)),
        Family::Log => (z.ln(), 1.0 / z),
    };
    4.0 * p.lambda * p.lambda * dz.norm_sqr() / (k * p.lambda * p.lambda + (zeta - p.z0).norm_sqr()).powi(2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_params_are_valid(k in curvature(), fam in family(), seed in any::<u64>()) {
        let p = sample_valid_params(k, fam, &mut ChaCha8Rng::seed_from_u64(seed));
        let rep = validate_params(&p);
        prop_assert!(rep.validity.is_valid(), "{p:?}: {:?}", rep.validity);
        prop_assert!(rep.agree);
    }

    #[test]
    fn density_matches_oracle(k in curvature(), fam in family(), seed in any::<u64>(), r in 1e-3..1e3f64, t in 0.01..3.13f64) {
        let p = sample_valid_params(k, fam, &mut ChaCha8Rng::seed_from_u64(seed));
        let z = Complex64::from_polar(r, t);
        let got = evaluate_density(&p, z).unwrap().exp();
        let want = density_oracle(&p, z);
        prop_assert!((got - want).abs() <= 1e-10 * want, "{got} vs {want}");
    }

    #[test]
    fn synthesis_round_trips(k in curvature(), c1 in -6.0..6.0f64, c2 in -6.0..6.0f64) {
        match synthesize(k, c1, c2) {
            Ok(p) => {
                prop_assert!(existence(k, c1, c2));
                prop_assert!(validate_params(&p).validity.is_valid());
                let b = boundary_constants(&p);
                prop_assert!((b.c1 - c1).abs() < 1e-9 && (b.c2 - c2).abs() < 1e-9);
            }
            Err(_) => prop_assert!(!existence(k, c1, c2)),
        }
    }

    #[test]
    fn json_round_trip(k in curvature(), fam in family(), seed in any::<u64>()) {
        let p = sample_valid_params(k, fam, &mut ChaCha8Rng::seed_from_u64(seed));
        let back: CanonicalParams = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(back.family, p.family);
        prop_assert_eq!(back.k, p.k);
        prop_assert_eq!(back.lambda, p.lambda);
        prop_assert_eq!(back.z0, p.z0);
        prop_assert!(back.gamma == p.gamma || (back.gamma.is_nan() && p.gamma.is_nan()));
    }
}

/// Neumann constant from the boundary values of the oracle density:
/// `c = ∂_t v / e^{v/2}` at `t = 0`, by a central difference.
fn neumann_oracle(p: &CanonicalParams, s: f64) -> f64 {
    let h = 1e-5 * s.abs();
    let v = |t: f64| density_oracle(p, Complex64::new(s, t)).ln();
    let dv = (-v(2.0 * h) + 4.0 * v(h) - 3.0 * v(0.0)) / (2.0 * h);
    dv / (v(0.0) / 2.0).exp()
}

#[test]
fn boundary_constants_match_density() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in Curvature::ALL {
        for fam in [Family::Power, Family::Log] {
            for _ in 0..4 {
                let p = sample_valid_params(k, fam, &mut rng);
                let b = boundary_constants(&p);
                for s in [0.3, 1.7] {
                    assert!((neumann_oracle(&p, s) - b.c1).abs() < 1e-5 * (1.0 + b.c1.abs()), "{p:?}");
                    assert!((neumann_oracle(&p, -s) - b.c2).abs() < 1e-5 * (1.0 + b.c2.abs()), "{p:?}");
                }
            }
        }
    }
}

#[test]
fn invalid_inputs_are_rejected() {
    let z0 = Complex64::new(0.0, 0.0);
    for p in [
        CanonicalParams::power(Curvature::Spherical, -0.5, 1.0, z0),
        CanonicalParams::power(Curvature::Spherical, 0.5, 0.0, z0),
        CanonicalParams::power(Curvature::Hyperbolic, 0.5, 1.0, Complex64::new(0.0, 0.5)),
        CanonicalParams::log(Curvature::Flat, 1.0, Complex64::new(0.0, PI)),
    ] {
        assert!(!validate_params(&p).validity.is_valid(), "{p:?}");
    }
}

#[test]
fn named_examples() {
    // a lune: the upper half-plane under z^γ onto a sector, then stereographically
    let lune = CanonicalParams::power(Curvature::Spherical, 0.5, 1.0, Complex64::new(0.0, 0.0));
    let b = boundary_constants(&lune);
    assert!(b.c1.abs() < 1e-15 && b.c2.abs() < 1e-15);
    assert!(matches!(classify_asymptotics(&lune), AsymptoticClass::Conical { alpha } if (alpha + 0.5).abs() < 1e-15));
    assert!(synthesize(Curvature::Hyperbolic, 1.0, 1.0).is_err());
    assert!(synthesize(Curvature::Flat, 1.0, 1.0).is_err());
    assert!(synthesize(Curvature::Flat, -1.0, 0.5).is_ok());
}
