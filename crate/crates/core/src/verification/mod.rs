//! Independent numerical checks of candidate metrics: density assembly, PDE and Neumann
//! residuals, semicircle lengths, area quadrature and the finiteness table at the origin.

mod area;
mod field;
mod finiteness;
mod residuals;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use area::{
    annulus_area, area, half_disk_integral, semicircle_length, AreaReport, Domain, RegionIntegral, RING_FLOOR,
    TAIL_RATIO,
};
pub use field::{metric_from_dev, MetricField};
pub use finiteness::{finiteness_at_origin, finiteness_of_map, Finiteness, FinitenessVerdict, OriginData};
pub use residuals::{
    liouville_residual, neumann_residual, normal_derivative, ray_profile, schwarzian_from_density, GridSpec,
    LiouvilleStats, NeumannFit, RayProfile, NEUMANN_SAMPLES,
};

use crate::canonical::{asymptotic_fit_on, boundary_constants, AsymptoticClass, CanonicalParams};
use crate::error::Result;

/// One pass/fail judgement and the tolerance it was judged against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub liouville: f64,
    pub neumann: f64,
    pub area_relative: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { liouville: 1e-5, neumann: 1e-6, area_relative: 1e-5 }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Tolerances { liouville: tol, neumann: tol, area_relative: tol }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub liouville: Option<LiouvilleStats>,
    pub neumann: Vec<NeumannFit>,
    pub area: Option<AreaReport>,
    /// `[r, L(r)]` pairs.
    pub semicircle_lengths: Vec<[f64; 2]>,
    pub circle_fit_residuals: Vec<f64>,
    pub asymptotic_exponents: BTreeMap<String, f64>,
    pub verdicts: Vec<Verdict>,
}

impl ResidualReport {
    pub fn judge(&mut self, check: &str, value: f64, tolerance: f64) -> bool {
        let pass = value <= tolerance;
        self.verdicts.push(Verdict { check: check.into(), value, tolerance, pass });
        pass
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

/// Positive and negative boundary intervals used by the Neumann checks.
pub const NEUMANN_SIDES: [[f64; 2]; 2] = [[0.1, 2.0], [-2.0, -0.1]];

/// Runs the residual, boundary, length and area checks on a field whose only finite
/// singular point is the origin.
pub fn verify_field(field: &MetricField, expected: Option<[f64; 2]>, tol: &Tolerances) -> Result<ResidualReport> {
    let mut rep = ResidualReport::default();
    let stats = liouville_residual(field, &GridSpec { tol: tol.liouville, ..GridSpec::default() })?;
    rep.judge("liouville_max", stats.max, tol.liouville);
    rep.liouville = Some(stats);
    for (i, side) in NEUMANN_SIDES.iter().enumerate() {
        let fit = neumann_residual(field, *side, expected.map(|c| c[i]))?;
        let name = format!("neumann_c{}", i + 1);
        rep.judge(&name, fit.expected_deviation.unwrap_or(fit.residual), tol.neumann);
        rep.neumann.push(fit);
    }
    for k in 1..=6 {
        let r = 10f64.powi(-k);
        rep.semicircle_lengths.push([r, semicircle_length(field, r)?]);
    }
    let a = area(field, Domain::HalfPlane)?;
    let rel = if a.divergent { f64::INFINITY } else { a.error / a.value.abs() };
    rep.judge("area_relative_error", rel, tol.area_relative);
    rep.area = Some(a);
    let ray = ray_profile(field, std::f64::consts::FRAC_PI_4, 1e-8, 1e-3)?;
    rep.asymptotic_exponents.insert("ray_slope".into(), ray.slope);
    Ok(rep)
}

/// [`verify_field`] on the explicit canonical solution, against its boundary constants and
/// its predicted behavior at the origin.
pub fn verify_canonical(p: &CanonicalParams, tol: &Tolerances) -> Result<ResidualReport> {
    let b = boundary_constants(p);
    let mut rep = verify_field(&MetricField::from_canonical(p), Some([b.c1, b.c2]), tol)?;
    // deep radii keep the O(1/|ln r|) and O(r^γ) corrections below the fit tolerances
    let fit = asymptotic_fit_on(p, 1e-300, 1e-200)?;
    rep.asymptotic_exponents.insert("fitted_slope".into(), fit.slope);
    if matches!(fit.class, AsymptoticClass::LogFour) {
        rep.asymptotic_exponents.insert("log_four_variation".into(), fit.log_four_variation);
    }
    rep.judge("asymptotic_class_consistent", if fit.consistent { 0.0 } else { 1.0 }, 0.0);
    Ok(rep)
}

/// Grid samples as CSV with columns `s,t,v,ev`.
pub fn grid_csv(field: &MetricField, grid: &GridSpec) -> Result<String> {
    samples_csv(field, &grid.points())
}

/// Boundary trace `t = 0` over `[a, b]` as CSV with columns `s,t,v,ev`.
pub fn boundary_csv(field: &MetricField, a: f64, b: f64, n: usize) -> Result<String> {
    let pts: Vec<Complex64> =
        (0..n).map(|i| Complex64::new(a + (b - a) * i as f64 / (n.max(2) - 1) as f64, 0.0)).collect();
    samples_csv(field, &pts)
}

fn samples_csv(field: &MetricField, pts: &[Complex64]) -> Result<String> {
    let mut out = String::from("s,t,v,ev\n");
    for z in pts {
        let v = field.v(*z)?;
        writeln!(out, "{:e},{:e},{:e},{:e}", z.re, z.im, v, v.exp()).expect("string write");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Curvature;

    #[test]
    fn sphere_canonical_report() {
        let p = CanonicalParams::power(Curvature::Spherical, 1.0, 1.0, Complex64::new(0.0, 0.0));
        let rep = verify_canonical(&p, &Tolerances::default()).unwrap();
        assert!(rep.passed(), "{:#?}", rep.verdicts);
        assert!((rep.area.unwrap().value - 2.0 * std::f64::consts::PI).abs() < 1e-6);
    }

    #[test]
    fn csv_header() {
        let f = MetricField::new(Curvature::Flat, vec![], |_| Ok(0.0));
        let s = boundary_csv(&f, 0.0, 1.0, 3).unwrap();
        assert!(s.starts_with("s,t,v,ev\n"));
        assert_eq!(s.lines().count(), 4);
    }
}
