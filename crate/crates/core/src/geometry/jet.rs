//! Order-3 truncated Taylor jets of holomorphic functions.
//!
//! A [`Jet3`] carries `(f, f', f'', f''')` at one point. Arithmetic and
//! composition follow the truncated Taylor rules, so evaluating an expression
//! on [`Jet3::variable`] yields the first three complex derivatives exactly
//! (up to rounding).

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::point::ComplexPt;
use crate::scalar::{cr, log_upper, Cx, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct Jet3<T> {
    pub f0: Cx<T>,
    pub f1: Cx<T>,
    pub f2: Cx<T>,
    pub f3: Cx<T>,
}

impl<T: Real> Jet3<T> {
    pub fn new(f0: Cx<T>, f1: Cx<T>, f2: Cx<T>, f3: Cx<T>) -> Self {
        Jet3 { f0, f1, f2, f3 }
    }

    pub fn constant(c: Cx<T>) -> Self {
        let z = cr(T::zero());
        Jet3::new(c, z, z, z)
    }

    /// The identity map seeded at `z`.
    pub fn variable(z: Cx<T>) -> Self {
        let o = cr(T::zero());
        Jet3::new(z, cr(T::one()), o, o)
    }

    pub fn value(&self) -> Cx<T> {
        self.f0
    }

    pub fn is_finite(&self) -> bool {
        [self.f0, self.f1, self.f2, self.f3]
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Composes an outer function, given by its value and first three
    /// derivatives at `self.f0`, with this jet (Faà di Bruno to order 3).
    pub fn chain(&self, outer: [Cx<T>; 4]) -> Self {
        let [h0, h1, h2, h3] = outer;
        let (g1, g2, g3) = (self.f1, self.f2, self.f3);
        let three = cr(T::lit(3.0));
        Jet3::new(
            h0,
            h1 * g1,
            h2 * g1 * g1 + h1 * g2,
            h3 * g1 * g1 * g1 + three * h2 * g1 * g2 + h1 * g3,
        )
    }

    /// Composition `outer ∘ self` where `outer` is itself a jet taken at `self.f0`.
    pub fn compose_with(&self, outer: &Jet3<T>) -> Self {
        self.chain([outer.f0, outer.f1, outer.f2, outer.f3])
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Jet3::new(self.f0 * s, self.f1 * s, self.f2 * s, self.f3 * s)
    }

    pub fn recip(&self) -> Self {
        let u = self.f0.inv();
        let u2 = u * u;
        let u3 = u2 * u;
        self.chain([u, -u2, u3 * T::lit(2.0), -(u3 * u) * T::lit(6.0)])
    }

    pub fn exp(&self) -> Self {
        let e = self.f0.exp();
        self.chain([e, e, e, e])
    }

    /// Principal logarithm; the value uses the standard branch cut on the negative axis.
    pub fn ln(&self) -> Self {
        self.ln_from(self.f0.ln())
    }

    /// Logarithm with argument in `[0, π]`, the branch used on the closed upper half-plane.
    pub fn ln_upper(&self) -> Self {
        self.ln_from(log_upper(self.f0))
    }

    /// Logarithm whose value is supplied by the caller (any branch); derivatives are branch-free.
    pub fn ln_from(&self, value: Cx<T>) -> Self {
        let u = self.f0.inv();
        let u2 = u * u;
        self.chain([value, u, -u2, u2 * u * T::lit(2.0)])
    }

    /// `self^p` for a complex exponent, through `exp(p · ln_upper(self))`.
    pub fn powc_upper(&self, p: Cx<T>) -> Self {
        self.ln_upper().scale(p).exp()
    }

    pub fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return Jet3::constant(cr(T::one()));
        }
        let nn = T::from_i32(n).unwrap();
        let v = |k: i32| self.f0.powi(k);
        self.chain([
            v(n),
            v(n - 1) * nn,
            v(n - 2) * (nn * (nn - T::one())),
            v(n - 3) * (nn * (nn - T::one()) * (nn - T::lit(2.0))),
        ])
    }
}

impl<T: Real> Add for Jet3<T> {
    type Output = Jet3<T>;
    fn add(self, o: Jet3<T>) -> Jet3<T> {
        Jet3::new(self.f0 + o.f0, self.f1 + o.f1, self.f2 + o.f2, self.f3 + o.f3)
    }
}

impl<T: Real> Sub for Jet3<T> {
    type Output = Jet3<T>;
    fn sub(self, o: Jet3<T>) -> Jet3<T> {
        Jet3::new(self.f0 - o.f0, self.f1 - o.f1, self.f2 - o.f2, self.f3 - o.f3)
    }
}

impl<T: Real> Neg for Jet3<T> {
    type Output = Jet3<T>;
    fn neg(self) -> Jet3<T> {
        Jet3::new(-self.f0, -self.f1, -self.f2, -self.f3)
    }
}

impl<T: Real> Mul for Jet3<T> {
    type Output = Jet3<T>;
    fn mul(self, o: Jet3<T>) -> Jet3<T> {
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        Jet3::new(
            self.f0 * o.f0,
            self.f1 * o.f0 + self.f0 * o.f1,
            self.f2 * o.f0 + self.f1 * o.f1 * two + self.f0 * o.f2,
            self.f3 * o.f0 + (self.f2 * o.f1 + self.f1 * o.f2) * three + self.f0 * o.f3,
        )
    }
}

impl<T: Real> Div for Jet3<T> {
    type Output = Jet3<T>;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet3<T>) -> Jet3<T> {
        self * o.recip()
    }
}

impl<T: Real> Add<Cx<T>> for Jet3<T> {
    type Output = Jet3<T>;
    fn add(mut self, c: Cx<T>) -> Jet3<T> {
        self.f0 = self.f0 + c;
        self
    }
}

impl<T: Real> Mul<Cx<T>> for Jet3<T> {
    type Output = Jet3<T>;
    fn mul(self, c: Cx<T>) -> Jet3<T> {
        self.scale(c)
    }
}

/// Which affine chart of the sphere a [`ChartJet`] is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chart {
    /// The jet is of `g` itself.
    Direct,
    /// The jet is of `−1/g`.
    Inverted,
}

/// A jet of a sphere-valued map, stored in whichever chart keeps the value in the unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct ChartJet<T> {
    pub chart: Chart,
    pub jet: Jet3<T>,
}

impl<T: Real> ChartJet<T> {
    /// Wraps a direct jet, switching to the inverted chart when `|g| > 1`.
    pub fn from_direct(j: Jet3<T>) -> Self {
        if j.f0.norm() > T::one() {
            ChartJet { chart: Chart::Inverted, jet: -j.recip() }
        } else {
            ChartJet { chart: Chart::Direct, jet: j }
        }
    }

    /// Wraps a jet of `−1/g`, switching back when `|−1/g| > 1`.
    pub fn from_inverted(h: Jet3<T>) -> Self {
        if h.f0.norm() > T::one() {
            ChartJet { chart: Chart::Direct, jet: -h.recip() }
        } else {
            ChartJet { chart: Chart::Inverted, jet: h }
        }
    }

    pub fn value(&self) -> ComplexPt<T> {
        match self.chart {
            Chart::Direct => ComplexPt::from_cx(self.jet.f0),
            Chart::Inverted => ComplexPt::from_cx(self.jet.f0).chart_switch(),
        }
    }

    /// Jet of `g` in the direct chart, `None` at a pole.
    pub fn direct(&self) -> Option<Jet3<T>> {
        match self.chart {
            Chart::Direct => Some(self.jet),
            Chart::Inverted if self.jet.f0.norm() > T::zero() => Some(-self.jet.recip()),
            Chart::Inverted => None,
        }
    }

    /// Jet of `−1/g`, `None` at a zero of `g`.
    pub fn inverted(&self) -> Option<Jet3<T>> {
        match self.chart {
            Chart::Inverted => Some(self.jet),
            Chart::Direct if self.jet.f0.norm() > T::zero() => Some(-self.jet.recip()),
            Chart::Direct => None,
        }
    }

    /// `|g'| / (1 + |g|²)`, which has the same expression in both charts.
    pub fn spherical_derivative(&self) -> T {
        self.jet.f1.norm() / (T::one() + self.jet.f0.norm_sqr())
    }

    /// `1 + K|g|²` scaled by `|−1/g|²` in the inverted chart; only its sign matters.
    pub fn range_factor(&self, k: T) -> T {
        match self.chart {
            Chart::Direct => T::one() + k * self.jet.f0.norm_sqr(),
            Chart::Inverted => self.jet.f0.norm_sqr() + k,
        }
    }

    /// `log(4|g'|² / (1 + K|g|²)²)`, computed without forming `g` near its poles.
    ///
    /// Returns `None` where the range factor vanishes or is negative.
    pub fn log_density(&self, k: T) -> Option<T> {
        let r = self.range_factor(k);
        if r <= T::zero() || !(self.jet.f1.norm() > T::zero()) {
            return None;
        }
        let two = T::lit(2.0);
        Some(T::lit(4.0).ln() + two * self.jet.f1.norm().ln() - two * r.ln())
    }
}
