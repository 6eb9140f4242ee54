use serde::{Deserialize, Serialize};

use super::jet::{Chart, ChartJet, Jet3};
use super::point::ComplexPt;
use super::Curvature;
use crate::error::{Error, Result};
use crate::scalar::{cr, Cx, Real};

/// A Möbius transformation `z ↦ (az + b)/(cz + d)` normalized to `ad − bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct Mobius<T> {
    pub a: Cx<T>,
    pub b: Cx<T>,
    pub c: Cx<T>,
    pub d: Cx<T>,
}

impl<T: Real> Mobius<T> {
    /// Normalizes the coefficients by a square root of the determinant.
    pub fn new(a: Cx<T>, b: Cx<T>, c: Cx<T>, d: Cx<T>) -> Result<Self> {
        let det = a * d - b * c;
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if !(det.norm() > T::epsilon() * scale * scale) || !det.norm().is_finite() {
            return Err(Error::DegenerateInput(format!("Möbius determinant {det} vanishes")));
        }
        let s = det.sqrt().inv();
        Ok(Mobius { a: a * s, b: b * s, c: c * s, d: d * s })
    }

    pub fn identity() -> Self {
        let (o, z) = (cr(T::one()), cr(T::zero()));
        Mobius { a: o, b: z, c: z, d: o }
    }

    /// `z ↦ z + t`.
    pub fn translation(t: Cx<T>) -> Self {
        let (o, z) = (cr(T::one()), cr(T::zero()));
        Mobius { a: o, b: t, c: z, d: o }
    }

    /// `z ↦ −1/z`.
    pub fn inversion() -> Self {
        let (o, z) = (cr(T::one()), cr(T::zero()));
        Mobius { a: z, b: -o, c: o, d: z }
    }

    /// `z ↦ k z`.
    pub fn scaling(k: Cx<T>) -> Result<Self> {
        Mobius::new(k, cr(T::zero()), cr(T::zero()), cr(T::one()))
    }

    pub fn det(&self) -> Cx<T> {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, z: ComplexPt<T>) -> ComplexPt<T> {
        let (x, y) = z.homogeneous();
        ComplexPt::from_homogeneous(self.a * x + self.b * y, self.c * x + self.d * y)
    }

    pub fn apply_cx(&self, z: Cx<T>) -> ComplexPt<T> {
        self.apply(ComplexPt::Finite(z))
    }

    /// `self ∘ other`.
    pub fn compose(&self, o: &Mobius<T>) -> Mobius<T> {
        let m = Mobius {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        };
        // products of unimodular matrices drift slowly; renormalize
        let s = m.det().sqrt().inv();
        Mobius { a: m.a * s, b: m.b * s, c: m.c * s, d: m.d * s }
    }

    pub fn inverse(&self) -> Mobius<T> {
        Mobius { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Coefficient-wise distance to `o`, minimized over the global sign ambiguity.
    pub fn distance(&self, o: &Mobius<T>) -> T {
        let diff = |s: T| {
            (self.a - o.a * s).norm()
                + (self.b - o.b * s).norm()
                + (self.c - o.c * s).norm()
                + (self.d - o.d * s).norm()
        };
        diff(T::one()).min(diff(-T::one()))
    }

    /// Jet of the map at a finite point, in the chart that keeps the value bounded.
    pub fn chart_jet(&self, z: Cx<T>) -> ChartJet<T> {
        let x = Jet3::variable(z);
        self.apply_jet(&ChartJet { chart: Chart::Direct, jet: x })
    }

    /// Post-composes a sphere-valued jet with this map.
    pub fn apply_jet(&self, g: &ChartJet<T>) -> ChartJet<T> {
        let h = g.jet;
        let (num, den) = match g.chart {
            Chart::Direct => (h * self.a + self.b, h * self.c + self.d),
            // g = −1/h, so M(g) = (b h − a)/(d h − c)
            Chart::Inverted => (h * self.b + (-self.a), h * self.d + (-self.c)),
        };
        if num.f0.norm() <= den.f0.norm() {
            ChartJet { chart: Chart::Direct, jet: num / den }
        } else {
            ChartJet { chart: Chart::Inverted, jet: -(den / num) }
        }
    }

    /// The unique Möbius map `m` with `m(0) = f0`, `m'(0) = f1`, `m''(0) = f2`.
    pub fn from_jet2(f0: Cx<T>, f1: Cx<T>, f2: Cx<T>) -> Result<Self> {
        if !(f1.norm() > T::zero()) {
            return Err(Error::CriticalPoint(f1.norm().to_f64().unwrap_or(0.0)));
        }
        let kappa = f2 / (f1 * T::lit(2.0));
        Mobius::new(f1 - f0 * kappa, f0, -kappa, cr(T::one()))
    }

    /// The Möbius map agreeing with the sphere-valued jet `g` to second order at `z0`.
    pub fn osculating(z0: Cx<T>, g: &ChartJet<T>) -> Result<Self> {
        let local = Mobius::from_jet2(g.jet.f0, g.jet.f1, g.jet.f2)?;
        let m = local.compose(&Mobius::translation(-z0));
        Ok(match g.chart {
            Chart::Direct => m,
            Chart::Inverted => Mobius::inversion().compose(&m),
        })
    }
}

/// Orientation-preserving isometry `g ↦ (αg − β̄)/(Kβg + ᾱ)` of the space-form metric.
pub fn isometry_normal_form<T: Real>(alpha: Cx<T>, beta: Cx<T>, k: Curvature) -> Result<Mobius<T>> {
    let kk = k.value::<T>();
    let unit = alpha.norm_sqr() + kk * beta.norm_sqr();
    if (unit - T::one()).abs() > T::lit(1e-12).max(T::epsilon() * T::lit(8.0)) {
        return Err(Error::ConstraintViolation(format!(
            "|alpha|^2 + K|beta|^2 = {unit}, expected 1"
        )));
    }
    Mobius::new(alpha, -beta.conj(), beta * kk, alpha.conj())
}

/// A map of a domain into the Riemann sphere that can be differentiated to third order.
pub trait SphereMap<T: Real> {
    fn chart_jet(&self, z: Cx<T>) -> Result<ChartJet<T>>;
}

impl<T: Real> SphereMap<T> for Mobius<T> {
    fn chart_jet(&self, z: Cx<T>) -> Result<ChartJet<T>> {
        Ok(Mobius::chart_jet(self, z))
    }
}

/// Lifts a function written on [`Jet3`] values to a [`SphereMap`].
pub struct JetFn<F>(pub F);

impl<T: Real, F: Fn(Jet3<T>) -> Jet3<T>> SphereMap<T> for JetFn<F> {
    fn chart_jet(&self, z: Cx<T>) -> Result<ChartJet<T>> {
        let j = (self.0)(Jet3::variable(z));
        if !j.is_finite() {
            return Err(Error::DomainError(format!("map not evaluable at {z}")));
        }
        Ok(ChartJet::from_direct(j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn cayley_sends_i_to_zero() {
        let m = Mobius::new(cr(1.0), cx(0.0, -1.0), cr(1.0), cx(0.0, 1.0)).unwrap();
        assert!(m.apply_cx(cx(0.0, 1.0)).chordal_distance(&ComplexPt::new(0.0, 0.0)) < 1e-15);
        assert!((m.det() - cr(1.0)).norm() < 1e-15);
    }

    #[test]
    fn pole_and_infinity() {
        let m = Mobius::new(cr(2.0), cr(1.0), cr(1.0), cr(1.0)).unwrap();
        assert!(m.apply_cx(cr(-1.0)).is_infinite());
        let w = m.apply(ComplexPt::Infinity).finite().unwrap();
        assert!((w - cr(2.0)).norm() < 1e-15);
    }

    #[test]
    fn jet2_reconstruction() {
        let m = Mobius::new(cx(1.0, 2.0), cx(-0.5, 0.1), cx(0.3, -0.2), cx(1.0, 1.0)).unwrap();
        let z0 = cx(0.2, 0.4);
        let g = m.chart_jet(z0);
        let r = Mobius::osculating(z0, &g).unwrap();
        assert!(r.distance(&m) < 1e-12, "{r:?} vs {m:?}");
    }

    #[test]
    fn jet_across_the_pole() {
        // 1/z evaluated right at its pole stays finite in the inverted chart
        let m = Mobius::new(cr(0.0f64), cr(1.0), cr(1.0), cr(0.0)).unwrap();
        let j = m.chart_jet(cr(0.0));
        assert_eq!(j.chart, Chart::Inverted);
        assert!(j.value().is_infinite());
        assert!((j.spherical_derivative() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn isometry_rejects_non_unit() {
        assert!(isometry_normal_form(cr(1.0), cr(0.5), Curvature::Spherical).is_err());
        let id = isometry_normal_form(cr(1.0f64), cr(0.0), Curvature::Hyperbolic).unwrap();
        assert!(id.distance(&Mobius::identity()) < 1e-15);
    }
}
