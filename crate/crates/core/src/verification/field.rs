use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::canonical::{evaluate_density, CanonicalParams};
use crate::developing::DevelopingMap;
use crate::error::{Error, Result};
use crate::geometry::{ChartJet, Curvature};

type DensityFn = dyn Fn(Complex64) -> Result<f64> + Send + Sync;
type JetFn = dyn Fn(Complex64) -> Result<ChartJet<f64>> + Send + Sync;

/// A log-density `v` on the closed upper half-plane, with optional developing-map jets.
#[derive(Clone)]
pub struct MetricField {
    v: Arc<DensityFn>,
    jet: Option<Arc<JetFn>>,
    pub k: Curvature,
    /// Finite boundary points where `v` may be singular.
    pub singular: Vec<f64>,
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricField")
            .field("k", &self.k)
            .field("singular", &self.singular)
            .field("has_jet", &self.jet.is_some())
            .finish()
    }
}

impl MetricField {
    pub fn new<F>(k: Curvature, singular: Vec<f64>, v: F) -> Self
    where
        F: Fn(Complex64) -> Result<f64> + Send + Sync + 'static,
    {
        MetricField { v: Arc::new(v), jet: None, k, singular }
    }

    /// The field of the explicit canonical solution.
    pub fn from_canonical(p: &CanonicalParams) -> Self {
        let p = *p;
        MetricField::new(p.k, vec![0.0], move |z| evaluate_density(&p, z))
    }

    pub fn v(&self, z: Complex64) -> Result<f64> {
        (self.v)(z)
    }

    pub fn ev(&self, z: Complex64) -> Result<f64> {
        Ok(self.v(z)?.exp())
    }

    pub fn jet(&self, z: Complex64) -> Option<Result<ChartJet<f64>>> {
        self.jet.as_ref().map(|j| j(z))
    }

    pub fn has_jet(&self) -> bool {
        self.jet.is_some()
    }

    /// `v(−s, t)`: swaps the roles of the two half-axes.
    pub fn reflected(&self) -> Self {
        let v = self.v.clone();
        MetricField {
            v: Arc::new(move |z: Complex64| v(-z.conj())),
            jet: None,
            k: self.k,
            singular: self.singular.iter().map(|q| -q).collect(),
        }
    }

    /// `v + dv`; the result no longer comes from a developing map.
    pub fn perturbed<F>(&self, dv: F) -> Self
    where
        F: Fn(Complex64) -> f64 + Send + Sync + 'static,
    {
        let v = self.v.clone();
        MetricField { v: Arc::new(move |z| Ok(v(z)? + dv(z))), jet: None, k: self.k, singular: self.singular.clone() }
    }

    /// `ṽ(w) = v(−1/w) − 4 ln|w|`, the same metric in the chart `w = −1/z`.
    pub fn inverted(&self) -> Self {
        let v = self.v.clone();
        MetricField {
            v: Arc::new(move |w: Complex64| {
                if w.norm() == 0.0 {
                    return Err(Error::DomainError("w = 0 is the point at infinity".into()));
                }
                // polar form keeps −1/w finite for tiny |w|
                let (r, t) = w.to_polar();
                Ok(v(Complex64::from_polar(1.0 / r, std::f64::consts::PI - t))? - 4.0 * r.ln())
            }),
            jet: None,
            k: self.k,
            singular: self.singular.iter().filter(|q| **q != 0.0).map(|q| -1.0 / q).chain([0.0]).collect(),
        }
    }

    /// Distance from `z` to the nearest singular point.
    pub fn singular_distance(&self, z: Complex64) -> f64 {
        self.singular.iter().map(|q| (z - q).norm()).fold(f64::INFINITY, f64::min)
    }
}

/// `v = log(4|g'|² / (1 + K|g|²)²)` for a developing map into the space form of curvature `K`.
pub fn metric_from_dev(dm: &DevelopingMap, k: Curvature) -> Result<MetricField> {
    if dm.k != k {
        return Err(Error::DomainError(format!("map targets curvature {}, requested {k}", dm.k)));
    }
    if k != Curvature::Spherical {
        dm.check_range()?;
    }
    let singular = match dm.numeric() {
        Some(m) => m.spec.pole_list().iter().map(|p| p.q).collect(),
        None => vec![0.0],
    };
    let kk = k.value::<f64>();
    let for_v = dm.clone();
    let for_jet = dm.clone();
    Ok(MetricField {
        v: Arc::new(move |z| {
            let j = for_v.chart_jet(z)?;
            let rf = j.range_factor(kk);
            if !(rf > 0.0) {
                return Err(Error::RangeViolation { value: rf, z: format!("{z}") });
            }
            j.log_density(kk).ok_or_else(|| Error::CriticalPoint(j.jet.f1.norm()))
        }),
        jet: Some(Arc::new(move |z| for_jet.chart_jet(z))),
        k,
        singular,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::developing::{solve_global, SymmetricFactor, Variant};
    use crate::geometry::Mobius;

    fn identity_map(k: Curvature) -> DevelopingMap {
        DevelopingMap {
            variant: Variant::PowerForm { gamma: 0.0, f: SymmetricFactor::monomial(1), psi: Mobius::identity() },
            k,
            domain_radius: Some(0.5),
        }
    }

    #[test]
    fn stereographic_and_flat() {
        let f = metric_from_dev(&identity_map(Curvature::Spherical), Curvature::Spherical).unwrap();
        assert!((f.ev(Complex64::new(0.0, 1.0)).unwrap() - 1.0).abs() < 1e-15);
        let f = metric_from_dev(&identity_map(Curvature::Flat), Curvature::Flat).unwrap();
        assert!((f.ev(Complex64::new(0.3, 0.2)).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn square_root_map() {
        // g = z^{1/2}: |g'| = 1/2 at z = 1
        let f = metric_from_dev(&solve_global(0.375), Curvature::Spherical).unwrap();
        assert!((f.ev(Complex64::new(1.0, 0.0)).unwrap() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn curvature_mismatch_and_range() {
        assert!(metric_from_dev(&identity_map(Curvature::Flat), Curvature::Spherical).is_err());
        let wide = DevelopingMap { domain_radius: Some(3.0), ..identity_map(Curvature::Hyperbolic) };
        assert!(matches!(metric_from_dev(&wide, Curvature::Hyperbolic), Err(Error::RangeViolation { .. })));
    }

    #[test]
    fn inverted_chart_preserves_density_form() {
        let f = metric_from_dev(&identity_map(Curvature::Spherical), Curvature::Spherical).unwrap();
        let w = Complex64::new(0.3, 0.4);
        let g = f.inverted();
        // the sphere metric is invariant under z -> -1/z
        assert!((g.v(w).unwrap() - f.v(w).unwrap()).abs() < 1e-13);
    }
}
