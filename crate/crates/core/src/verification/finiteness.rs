use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::developing::{Case, DevelopingMap, SymmetricFactor};
use crate::error::{Error, Result};
use crate::geometry::{Curvature, Mobius};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Finiteness {
    Finite,
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinitenessVerdict {
    pub verdict: Finiteness,
    pub reason: String,
    /// `(c1, c2)` forced by the map in the borderline hyperbolic log case.
    pub boundary_constants: Option<[f64; 2]>,
}

impl FinitenessVerdict {
    fn new(verdict: Finiteness, reason: impl Into<String>) -> Self {
        FinitenessVerdict { verdict, reason: reason.into(), boundary_constants: None }
    }

    pub fn is_finite(&self) -> bool {
        self.verdict == Finiteness::Finite
    }
}

/// Data of a closed-form map near the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OriginData {
    pub case: Case,
    pub gamma: f64,
    pub psi: Mobius<f64>,
    pub f: SymmetricFactor,
    #[serde(rename = "K")]
    pub k: Curvature,
}

impl OriginData {
    pub fn from_map(dm: &DevelopingMap) -> Result<Self> {
        let case = dm.case().ok_or_else(|| Error::UnsupportedVariant("numeric maps have no normal form".into()))?;
        let gamma = match &dm.variant {
            crate::developing::Variant::PowerForm { gamma, .. } | crate::developing::Variant::SpiralForm { gamma, .. } => *gamma,
            _ => 0.0,
        };
        Ok(OriginData { case, gamma, psi: dm.psi().expect("closed form"), f: dm.factor().expect("closed form").clone(), k: dm.k })
    }
}

const ZERO_TOL: f64 = 1e-12;

/// `|C u + D|² + K|A u + B|²` at a finite point, or `|C|² + K|A|²` at infinity.
fn range_form(psi: &Mobius<f64>, k: f64, u: Option<Complex64>) -> f64 {
    match u {
        Some(u) => (psi.c * u + psi.d).norm_sqr() + k * (psi.a * u + psi.b).norm_sqr(),
        None => psi.c.norm_sqr() + k * psi.a.norm_sqr(),
    }
}

/// Whether the metric of a closed-form map has finite area near the origin.
pub fn finiteness_at_origin(data: &OriginData) -> FinitenessVerdict {
    use Finiteness::*;
    let k = data.k.value::<f64>();
    let psi = &data.psi;
    let scale = psi.a.norm_sqr() + psi.b.norm_sqr() + psi.c.norm_sqr() + psi.d.norm_sqr();
    let f0 = data.f.value_at_zero();
    match data.case {
        Case::I => {
            // limit of the inner map z^γ F(z) at 0
            let u0 = match f0 {
                Some(v) if data.gamma == 0.0 => Some(v),
                Some(_) => Some(Complex64::new(0.0, 0.0)),
                None => None,
            };
            let form = range_form(psi, k, u0);
            let at = if u0.is_some() { "finite limit" } else { "pole" };
            if form.abs() > ZERO_TOL * scale {
                FinitenessVerdict::new(Finite, format!("inner map has a {at} whose image is an interior point"))
            } else if data.k == Curvature::Flat {
                FinitenessVerdict::new(Infinite, format!("inner map has a {at} sent to infinity of the plane"))
            } else {
                FinitenessVerdict::new(Infinite, format!("inner map has a {at} sent to the ideal boundary"))
            }
        }
        Case::II => {
            let form = range_form(psi, k, None);
            if form.abs() > ZERO_TOL * scale {
                return FinitenessVerdict::new(Finite, "log pole sent to an interior point");
            }
            if data.k == Curvature::Flat {
                return FinitenessVerdict::new(Infinite, "log pole sent to infinity of the plane");
            }
            if f0.is_none() {
                return FinitenessVerdict::new(Infinite, "F has a pole and the log pole is sent to the ideal boundary");
            }
            let delta = -psi.a * psi.b.conj() + psi.c * psi.d.conj();
            if delta.re.abs() <= ZERO_TOL * scale {
                return FinitenessVerdict::new(Infinite, "Re delta = 0 on the ideal boundary");
            }
            let c1 = -2.0 * delta.im * delta.re.signum();
            FinitenessVerdict {
                verdict: Finite,
                reason: "log pole on the ideal boundary with Re delta != 0".into(),
                boundary_constants: Some([c1, -c1]),
            }
        }
        Case::III => FinitenessVerdict::new(Infinite, "spiral form: semicircle lengths stay bounded below"),
    }
}

/// [`finiteness_at_origin`] for a closed-form developing map.
pub fn finiteness_of_map(dm: &DevelopingMap) -> Result<FinitenessVerdict> {
    Ok(finiteness_at_origin(&OriginData::from_map(dm)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn data(case: Case, gamma: f64, psi: Mobius<f64>, f: SymmetricFactor, k: Curvature) -> OriginData {
        OriginData { case, gamma, psi, f, k }
    }

    #[test]
    fn table_rows() {
        let id = Mobius::identity();
        let d = data(Case::I, 0.5, id, SymmetricFactor::one(), Curvature::Spherical);
        assert!(finiteness_at_origin(&d).is_finite());
        let inv = Mobius::new(c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let d = data(Case::II, 0.0, inv, SymmetricFactor::zero(), Curvature::Flat);
        assert!(finiteness_at_origin(&d).is_finite());
        let d = data(Case::II, 0.0, id, SymmetricFactor::zero(), Curvature::Flat);
        assert!(!finiteness_at_origin(&d).is_finite());
        let d = data(Case::I, 0.5, inv, SymmetricFactor::one(), Curvature::Flat);
        assert!(!finiteness_at_origin(&d).is_finite());
    }

    #[test]
    fn borderline_hyperbolic_log() {
        let e = Complex64::from_polar(1.0, PI / 6.0);
        let psi = Mobius::new(c(1.0, 0.0), c(0.0, 0.0), -e, c(1.0, 0.0)).unwrap();
        let v = finiteness_at_origin(&data(Case::II, 0.0, psi, SymmetricFactor::zero(), Curvature::Hyperbolic));
        assert!(v.is_finite());
        let [c1, c2] = v.boundary_constants.unwrap();
        assert!((c1 + 1.0).abs() < 1e-14 && (c2 - 1.0).abs() < 1e-14);
    }
}
