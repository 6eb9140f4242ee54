//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use liouville::developing::{construct_case, Case, DevelopingMap, SymmetricFactor};
use liouville::geometry::{Curvature, Mobius};
use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mob(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> Mobius<f64> {
    Mobius::new(a, b, cc, d).expect("invertible")
}

/// Closed-form maps covering every row of the finiteness table.
pub fn finiteness_instances() -> Vec<(&'static str, DevelopingMap)> {
    use Curvature::*;
    let id = Mobius::identity();
    let one = SymmetricFactor::one;
    let real = SymmetricFactor::real;
    let pole = || SymmetricFactor::monomial(-1);
    let cayley = |phi: f64| {
        let e = Complex64::from_polar(1.0, phi);
        mob(e, c(0.0, -1.0), e, c(0.0, 1.0))
    };
    let neg_inv = mob(c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
    let inv = mob(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
    let r = Some(0.1);
    let mk = |case, g, f, psi, k| construct_case(case, g, f, psi, k, r).expect("instance");
    vec![
        ("I sphere", mk(Case::I, 0.5, one(), id, Spherical)),
        ("I sphere regular", mk(Case::I, 0.0, real(0, &[1.0, 1.0]), id, Spherical)),
        ("I sphere mobius", mk(Case::I, 0.3, one(), mob(c(1.0, 0.0), c(2.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)), Spherical)),
        ("I flat", mk(Case::I, 0.5, one(), id, Flat)),
        ("I flat shifted", mk(Case::I, 0.7, one(), mob(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)), Flat)),
        ("I flat to infinity", mk(Case::I, 0.5, one(), neg_inv, Flat)),
        ("I flat to infinity affine", mk(Case::I, 0.7, one(), mob(c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)), Flat)),
        ("I disk", mk(Case::I, 0.5, real(0, &[0.5]), id, Hyperbolic)),
        ("I disk regular", mk(Case::I, 0.0, real(0, &[0.5, 0.2]), id, Hyperbolic)),
        ("I disk to boundary", mk(Case::I, 0.5, one(), cayley(0.2), Hyperbolic)),
        ("I disk to boundary 2", mk(Case::I, 0.25, one(), cayley(1.0), Hyperbolic)),
        ("I sphere pole", mk(Case::I, 0.5, pole(), id, Spherical)),
        ("I flat pole", mk(Case::I, 0.5, pole(), neg_inv, Flat)),
        ("I flat pole to infinity", mk(Case::I, 0.5, pole(), id, Flat)),
        ("I disk pole", mk(Case::I, 0.5, pole(), mob(c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)), Hyperbolic)),
        ("II sphere", mk(Case::II, 0.0, SymmetricFactor::zero(), id, Spherical)),
        ("II sphere factor", mk(Case::II, 0.0, real(0, &[1.0, 1.0]), mob(c(1.0, 0.0), c(2.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)), Spherical)),
        ("II sphere pole", mk(Case::II, 0.0, pole(), id, Spherical)),
        ("II flat", mk(Case::II, 0.0, SymmetricFactor::zero(), inv, Flat)),
        ("II flat negative", mk(Case::II, 0.0, SymmetricFactor::zero(), neg_inv, Flat)),
        ("II flat pole", mk(Case::II, 0.0, pole(), inv, Flat)),
        ("II flat to infinity", mk(Case::II, 0.0, SymmetricFactor::zero(), id, Flat)),
        ("II flat to infinity affine", mk(Case::II, 0.0, SymmetricFactor::zero(), mob(c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)), Flat)),
        ("II flat pole to infinity", mk(Case::II, 0.0, pole(), id, Flat)),
        ("II disk", mk(Case::II, 0.0, SymmetricFactor::zero(), mob(c(0.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 0.0)), Hyperbolic)),
        ("II disk two-log", mk(Case::II, 0.0, SymmetricFactor::zero(), mob(c(1.0, 0.0), c(1.0, 1.0), c(1.0, 0.0), c(0.0, 3.0)), Hyperbolic)),
        ("II disk two-log sixth", mk(Case::II, 0.0, SymmetricFactor::zero(), mob(c(1.0, 0.0), c(0.0, 0.0), -Complex64::from_polar(1.0, PI / 6.0), c(1.0, 0.0)), Hyperbolic)),
        ("II disk degenerate", mk(Case::II, 0.0, SymmetricFactor::zero(), mob(c(1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0), c(0.0, 3.0)), Hyperbolic)),
        ("II disk pole", mk(Case::II, 0.0, pole(), mob(c(1.0, 0.0), c(0.0, -3.0), c(1.0, 0.0), c(0.0, -5.0)), Hyperbolic)),
        ("III sphere", mk(Case::III, -1.0, SymmetricFactor::unimodular(0.3), id, Spherical)),
        ("III sphere mobius", mk(Case::III, -0.5, SymmetricFactor::unimodular(0.0), mob(c(1.0, 0.0), c(2.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)), Spherical)),
        ("III flat", mk(Case::III, -1.0, SymmetricFactor::unimodular(0.0), id, Flat)),
        ("III disk", mk(Case::III, -1.0, SymmetricFactor::unimodular(0.0), mob(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(30.0, 0.0)), Hyperbolic)),
    ]
}

