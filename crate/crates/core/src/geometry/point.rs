use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::{cr, cx, Cx, Real};

/// A point of the Riemann sphere: a finite complex value or the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub enum ComplexPt<T> {
    Finite(Cx<T>),
    Infinity,
}

impl<T: Real> ComplexPt<T> {
    pub fn new(re: T, im: T) -> Self {
        ComplexPt::Finite(cx(re, im))
    }

    /// Builds a point from a complex value; non-finite values become infinity.
    pub fn from_cx(z: Cx<T>) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            ComplexPt::Finite(z)
        } else {
            ComplexPt::Infinity
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ComplexPt::Infinity)
    }

    pub fn finite(&self) -> Option<Cx<T>> {
        match *self {
            ComplexPt::Finite(z) => Some(z),
            ComplexPt::Infinity => None,
        }
    }

    /// The chart switch `z ↦ −1/z`, which exchanges `0` and `∞`.
    pub fn chart_switch(&self) -> Self {
        match *self {
            ComplexPt::Infinity => ComplexPt::Finite(cr(T::zero())),
            ComplexPt::Finite(z) if z.re == T::zero() && z.im == T::zero() => ComplexPt::Infinity,
            ComplexPt::Finite(z) => ComplexPt::Finite(-z.inv()),
        }
    }

    /// Homogeneous coordinates `[x : y]` with `z = x / y`.
    pub fn homogeneous(&self) -> (Cx<T>, Cx<T>) {
        match *self {
            ComplexPt::Finite(z) => (z, cr(T::one())),
            ComplexPt::Infinity => (cr(T::one()), cr(T::zero())),
        }
    }

    pub fn from_homogeneous(x: Cx<T>, y: Cx<T>) -> Self {
        if y.norm() <= T::epsilon() * x.norm() || y.norm() == T::zero() {
            ComplexPt::Infinity
        } else {
            ComplexPt::from_cx(x / y)
        }
    }

    /// Image on the unit sphere under inverse stereographic projection (north pole = ∞).
    pub fn to_sphere(&self) -> [T; 3] {
        match *self {
            ComplexPt::Infinity => [T::zero(), T::zero(), T::one()],
            ComplexPt::Finite(z) => {
                let two = T::lit(2.0);
                let n2 = z.norm_sqr();
                if n2 <= T::one() {
                    let den = T::one() + n2;
                    [two * z.re / den, two * z.im / den, (n2 - T::one()) / den]
                } else {
                    // work with 1/z to keep precision near the north pole
                    let w = z.inv();
                    let m2 = w.norm_sqr();
                    let den = T::one() + m2;
                    [two * w.re / den, -two * w.im / den, (T::one() - m2) / den]
                }
            }
        }
    }

    /// Stereographic projection of a point of the unit sphere.
    pub fn from_sphere(x: [T; 3]) -> Self {
        let n = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let (x0, x1, x2) = (x[0] / n, x[1] / n, x[2] / n);
        if x2 <= T::zero() {
            ComplexPt::Finite(cx(x0, x1) / (T::one() - x2))
        } else {
            let q = cx(x0, x1) / (T::one() + x2);
            if q.norm() == T::zero() {
                ComplexPt::Infinity
            } else {
                ComplexPt::Finite(q.conj().inv())
            }
        }
    }

    /// Chordal distance on the unit sphere (diameter 2).
    pub fn chordal_distance(&self, other: &Self) -> T {
        match (*self, *other) {
            (ComplexPt::Infinity, ComplexPt::Infinity) => T::zero(),
            (ComplexPt::Finite(a), ComplexPt::Infinity) | (ComplexPt::Infinity, ComplexPt::Finite(a)) => {
                T::lit(2.0) / (T::one() + a.norm_sqr()).sqrt()
            }
            (ComplexPt::Finite(a), ComplexPt::Finite(b)) => {
                T::lit(2.0) * (a - b).norm() / ((T::one() + a.norm_sqr()) * (T::one() + b.norm_sqr())).sqrt()
            }
        }
    }
}

impl<T: Real> From<Cx<T>> for ComplexPt<T> {
    fn from(z: Cx<T>) -> Self {
        ComplexPt::from_cx(z)
    }
}

impl<T: Real> fmt::Display for ComplexPt<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexPt::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
            ComplexPt::Infinity => write!(f, "∞"),
        }
    }
}

/// Cross-ratio `(z1, z2; z3, z4) = (z1 − z3)(z2 − z4) / ((z1 − z4)(z2 − z3))`.
pub fn cross_ratio<T: Real>(z1: ComplexPt<T>, z2: ComplexPt<T>, z3: ComplexPt<T>, z4: ComplexPt<T>) -> ComplexPt<T> {
    let h = [z1.homogeneous(), z2.homogeneous(), z3.homogeneous(), z4.homogeneous()];
    let d = |i: usize, j: usize| h[i].0 * h[j].1 - h[j].0 * h[i].1;
    ComplexPt::from_homogeneous(d(0, 2) * d(1, 3), d(0, 3) * d(1, 2))
}
