//! Developing maps: closed forms for the three local normal forms at a boundary
//! singularity, exact global solutions for `Q = c/z²`, and ODE-backed maps for
//! Schwarzian data with several poles.

mod circles;
mod factor;
mod frobenius;
mod numeric;
mod ode;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use circles::{boundary_circles, fit_samples, CircleFit};
pub use factor::{SymmetricFactor, SymmetryTag};
pub use frobenius::{frobenius_seed, FrobeniusSeries};
pub use numeric::NumericMap;
pub use ode::{integrate_pair, ODESolutionPair, PairState, MIN_STEP};

use crate::error::{Error, Result};
use crate::geometry::{ChartJet, ComplexPt, Curvature, Jet3, Mobius, SphereMap};
use crate::schwarzian::SchwarzianSpec;

/// The three local normal forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    /// `ψ(z^γ F(z))`, `γ ∈ [0, 1)`.
    I,
    /// `ψ(F(z) + log z)`.
    II,
    /// `ψ(z^{iγ} F(z))`, `γ < 0`.
    III,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum Variant {
    PowerForm { gamma: f64, f: SymmetricFactor, psi: Mobius<f64> },
    LogForm { f: SymmetricFactor, psi: Mobius<f64> },
    SpiralForm { gamma: f64, f: SymmetricFactor, psi: Mobius<f64> },
    Numeric { map: NumericMap },
}

/// A locally univalent map from the closed upper half-plane (minus singular points) into
/// the sphere, together with the curvature of the target space form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DevelopingMap {
    #[serde(flatten)]
    pub variant: Variant,
    #[serde(rename = "K")]
    pub k: Curvature,
    /// Radius of the half-disk on which the map is claimed to be a developing map.
    pub domain_radius: Option<f64>,
}

/// Splits `γ ≥ 0` into a fractional exponent in `[0, 1)` and an integer power.
pub fn gamma_reduction(gamma: f64) -> (f64, i32) {
    let n = gamma.floor();
    let r = gamma - n;
    if 1.0 - r < 1e-14 {
        (0.0, n as i32 + 1)
    } else {
        (r, n as i32)
    }
}

impl DevelopingMap {
    fn closed_inner(&self, z: &Jet3<f64>, log: &Jet3<f64>) -> Option<(Jet3<f64>, Mobius<f64>)> {
        match &self.variant {
            Variant::PowerForm { gamma, f, psi } => {
                let fz = f.eval_jet(z);
                let inner = if *gamma == 0.0 { fz } else { (*log * Complex64::new(*gamma, 0.0)).exp() * fz };
                Some((inner, *psi))
            }
            Variant::LogForm { f, psi } => Some((*log + f.eval_jet(z), *psi)),
            Variant::SpiralForm { gamma, f, psi } => {
                Some(((*log * Complex64::new(0.0, *gamma)).exp() * f.eval_jet(z), *psi))
            }
            Variant::Numeric { .. } => None,
        }
    }

    /// The outer Möbius map of a closed form.
    pub fn psi(&self) -> Option<Mobius<f64>> {
        match &self.variant {
            Variant::PowerForm { psi, .. } | Variant::LogForm { psi, .. } | Variant::SpiralForm { psi, .. } => Some(*psi),
            Variant::Numeric { .. } => None,
        }
    }

    pub fn factor(&self) -> Option<&SymmetricFactor> {
        match &self.variant {
            Variant::PowerForm { f, .. } | Variant::LogForm { f, .. } | Variant::SpiralForm { f, .. } => Some(f),
            Variant::Numeric { .. } => None,
        }
    }

    pub fn case(&self) -> Option<Case> {
        match &self.variant {
            Variant::PowerForm { .. } => Some(Case::I),
            Variant::LogForm { .. } => Some(Case::II),
            Variant::SpiralForm { .. } => Some(Case::III),
            Variant::Numeric { .. } => None,
        }
    }

    pub fn numeric(&self) -> Option<&NumericMap> {
        match &self.variant {
            Variant::Numeric { map } => Some(map),
            _ => None,
        }
    }

    /// Jet at a point of the closed upper half-plane.
    pub fn chart_jet(&self, z: Complex64) -> Result<ChartJet<f64>> {
        if let Variant::Numeric { map } = &self.variant {
            return map.chart_jet(z);
        }
        if z.im < 0.0 {
            return Err(Error::DomainError(format!("{z} lies below the real axis")));
        }
        if z.norm() == 0.0 {
            return Err(Error::DomainError("the origin is singular".into()));
        }
        let x = Jet3::variable(z);
        self.closed_jet(&x, &x.ln_upper())
    }

    /// Jet of `w ↦ g(e^w)` continued to all `w`, for the closed forms.
    pub fn log_chart_jet(&self, w: Complex64) -> Result<ChartJet<f64>> {
        let lw = Jet3::variable(w);
        self.closed_jet(&lw.exp(), &lw)
    }

    fn closed_jet(&self, z: &Jet3<f64>, log: &Jet3<f64>) -> Result<ChartJet<f64>> {
        let (inner, psi) = self
            .closed_inner(z, log)
            .ok_or_else(|| Error::UnsupportedVariant("numeric maps have no closed form".into()))?;
        if !inner.f0.re.is_finite() || !inner.f0.im.is_finite() {
            return Err(Error::DomainError(format!("map not evaluable at {}", z.f0)));
        }
        Ok(psi.apply_jet(&ChartJet::from_direct(inner)))
    }

    /// Möbius map `Ψ` with `g̃(w + 2πi) = Ψ(g̃(w))`.
    pub fn monodromy(&self) -> Option<Mobius<f64>> {
        let (inner, psi) = match &self.variant {
            Variant::PowerForm { gamma, psi, .. } => {
                (Mobius::scaling(Complex64::from_polar(1.0, 2.0 * PI * gamma)).ok()?, *psi)
            }
            Variant::LogForm { psi, .. } => (Mobius::translation(Complex64::new(0.0, 2.0 * PI)), *psi),
            Variant::SpiralForm { gamma, psi, .. } => {
                (Mobius::scaling(Complex64::new((-2.0 * PI * gamma).exp(), 0.0)).ok()?, *psi)
            }
            Variant::Numeric { .. } => return None,
        };
        Some(psi.compose(&inner).compose(&psi.inverse()))
    }

    pub fn with_curvature(mut self, k: Curvature) -> Self {
        self.k = k;
        self
    }

    pub fn with_psi(mut self, m: Mobius<f64>) -> Self {
        match &mut self.variant {
            Variant::PowerForm { psi, .. } | Variant::LogForm { psi, .. } | Variant::SpiralForm { psi, .. } => *psi = m,
            Variant::Numeric { .. } => {}
        }
        self
    }

    /// Post-composes the closed form with a Möbius map.
    pub fn post_compose(self, m: &Mobius<f64>) -> Self {
        match self.psi() {
            Some(p) => self.with_psi(m.compose(&p)),
            None => self,
        }
    }

    /// Checks `1 + K|g|² > 0` on a log-polar sample of the half-disk of radius `domain_radius`.
    pub fn check_range(&self) -> Result<()> {
        if self.k == Curvature::Spherical {
            return Ok(());
        }
        let kk = self.k.value::<f64>();
        let rmax = self.domain_radius.unwrap_or(1e6);
        for i in 0..=48 {
            let r = 1e-6 * (rmax / 1e-6).powf(i as f64 / 48.0);
            for j in 0..=12 {
                let z = Complex64::from_polar(r, PI * j as f64 / 12.0);
                let g = self.chart_jet(z)?;
                let f = g.range_factor(kk);
                if !(f > 0.0) {
                    return Err(Error::RangeViolation { value: f, z: format!("{z}") });
                }
            }
        }
        Ok(())
    }
}

impl SphereMap<f64> for DevelopingMap {
    fn chart_jet(&self, z: Complex64) -> Result<ChartJet<f64>> {
        DevelopingMap::chart_jet(self, z)
    }
}

/// Builds one of the three local normal forms, checking the symmetry of `F` and, for
/// `K ≤ 0`, the range condition.
pub fn construct_case(
    case: Case,
    gamma: f64,
    f: SymmetricFactor,
    psi: Mobius<f64>,
    k: Curvature,
    domain_radius: Option<f64>,
) -> Result<DevelopingMap> {
    let f = SymmetricFactor::new(f.min_power, f.coeffs, f.tag)?;
    if f.is_zero() && case != Case::II {
        return Err(Error::DomainError("F vanishes identically".into()));
    }
    let variant = match case {
        Case::I => {
            if !(0.0..1.0).contains(&gamma) {
                return Err(Error::DomainError(format!("gamma = {gamma} must lie in [0, 1)")));
            }
            require_tag(&f, SymmetryTag::RealOnReal)?;
            Variant::PowerForm { gamma, f, psi }
        }
        Case::II => {
            require_tag(&f, SymmetryTag::RealOnReal)?;
            Variant::LogForm { f, psi }
        }
        Case::III => {
            if !(gamma < 0.0) {
                return Err(Error::DomainError(format!("gamma = {gamma} must be negative")));
            }
            require_tag(&f, SymmetryTag::Unimodular)?;
            Variant::SpiralForm { gamma, f, psi }
        }
    };
    let dm = DevelopingMap { variant, k, domain_radius };
    dm.check_range()?;
    Ok(dm)
}

fn require_tag(f: &SymmetricFactor, tag: SymmetryTag) -> Result<()> {
    if f.tag != tag {
        return Err(Error::SymmetryViolation(format!("factor tagged {:?}, expected {:?}", f.tag, tag)));
    }
    Ok(())
}

/// The developing map for `Q = c/z²` with real `c`, in the sphere.
pub fn solve_global(c: f64) -> DevelopingMap {
    let psi = Mobius::identity();
    let variant = if (2.0 * c - 1.0).abs() <= 1e-14 {
        Variant::LogForm { f: SymmetricFactor::zero(), psi }
    } else if c < 0.5 {
        let (gamma, n) = gamma_reduction((1.0 - 2.0 * c).sqrt());
        Variant::PowerForm { gamma, f: SymmetricFactor::monomial(n), psi }
    } else {
        Variant::SpiralForm { gamma: -(2.0 * c - 1.0).sqrt(), f: SymmetricFactor::unimodular(0.0), psi }
    };
    DevelopingMap { variant, k: Curvature::Spherical, domain_radius: None }
}

/// `g = y2/y1` with `(y1, y2, y1', y2') = (1, 0, 0, 1)` at `basepoint`.
pub fn developing_map_numeric(spec: &SchwarzianSpec, basepoint: Complex64) -> Result<DevelopingMap> {
    Ok(DevelopingMap {
        variant: Variant::Numeric { map: NumericMap::new(spec.clone(), basepoint)? },
        k: Curvature::Spherical,
        domain_radius: None,
    })
}

/// Probe quadruples in the upper half-plane for comparing maps up to Möbius.
pub const PROBE_QUADRUPLES: [[[f64; 2]; 4]; 4] = [
    [[0.0, 1.0], [0.0, 2.0], [1.0, 1.0], [-1.0, 1.0]],
    [[0.5, 0.5], [2.0, 1.5], [-1.5, 0.7], [0.2, 3.0]],
    [[-2.0, 0.3], [-0.4, 1.2], [1.1, 0.4], [3.0, 2.5]],
    [[0.1, 0.2], [0.7, 2.2], [-0.6, 0.9], [1.8, 0.6]],
];

/// Largest relative mismatch `|χ_a − χ_b| / (1 + |χ_a|)` of cross ratios of the images of
/// each quadruple; zero exactly when the two maps differ by a Möbius transformation there.
pub fn cross_ratio_defect<A: SphereMap<f64>, B: SphereMap<f64>>(a: &A, b: &B, quads: &[[[f64; 2]; 4]]) -> Result<f64> {
    let mut worst = 0.0f64;
    for quad in quads {
        let mut images = [[ComplexPt::Infinity; 4]; 2];
        for (i, [x, y]) in quad.iter().enumerate() {
            let z = Complex64::new(*x, *y);
            images[0][i] = a.chart_jet(z)?.value();
            images[1][i] = b.chart_jet(z)?.value();
        }
        let [p, q] = images;
        let ca = crate::geometry::cross_ratio(p[0], p[1], p[2], p[3]);
        let cb = crate::geometry::cross_ratio(q[0], q[1], q[2], q[3]);
        let d = match (ca.finite(), cb.finite()) {
            (Some(u), Some(v)) => (u - v).norm() / (1.0 + u.norm()),
            _ => ca.chordal_distance(&cb),
        };
        worst = worst.max(d);
    }
    Ok(worst)
}

/// Value of a sphere-valued map at a point, for quick sampling.
pub fn value_at(dm: &DevelopingMap, z: Complex64) -> Result<ComplexPt<f64>> {
    Ok(dm.chart_jet(z)?.value())
}
