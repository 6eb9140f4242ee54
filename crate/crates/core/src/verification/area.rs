use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::MetricField;
use crate::error::{Error, Result};
use crate::geometry::Chart;
use crate::quadrature::{integrate, linear_fit};

/// Smallest ring radius of the dyadic decomposition.
pub const RING_FLOOR: f64 = 1e-10;
/// Ring-sum ratio below which the tail is treated as geometric.
pub const TAIL_RATIO: f64 = 0.95;

/// Inner radius of the single deep band used for algebraic tails.
pub const DEEP_FLOOR: f64 = 1e-280;

const ANGLE_TOL: f64 = 1e-11;
const RADIAL_TOL: f64 = 1e-10;

/// `L(r) = r ∫₀^π e^{v(re^{iθ})/2} dθ`.
pub fn semicircle_length(field: &MetricField, r: f64) -> Result<f64> {
    let mut err = None;
    let i = integrate(
        |t| match field.v(Complex64::from_polar(r, t)) {
            Ok(v) => (v / 2.0).exp(),
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        0.0,
        PI,
        0.0,
        1e-10,
    )?;
    match err {
        Some(e) => Err(e),
        None => Ok(r * i.value),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    HalfDisk { radius: f64 },
    HalfPlane,
}

/// Integral over one half-disk centered at the origin, with the dyadic ring breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionIntegral {
    pub value: f64,
    pub error: f64,
    pub divergent: bool,
    /// Slope of `log S_k` against `log r_k` over the innermost rings.
    pub radial_exponent: f64,
    /// `p` in `S_k ≈ C |ln r_k|^{−p}` when the geometric test fails.
    pub log_exponent: Option<f64>,
    pub tail_ratio: f64,
    pub note: Option<String>,
    pub ring_sums: Vec<f64>,
}

/// `∫₀^π e^{v(e^{s+iθ}) + 2s} dθ`.
fn angular_integral(f: &MetricField, s: f64) -> Result<f64> {
    let r = s.exp();
    let mut err = None;
    let i = integrate(
        |t| match f.v(Complex64::from_polar(r, t)) {
            Ok(v) => (v + 2.0 * s).exp(),
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        0.0,
        PI,
        0.0,
        ANGLE_TOL,
    )?;
    match err {
        Some(e) => Err(e),
        None => Ok(i.value),
    }
}

/// Area of the half-annulus `r1 ≤ |z| ≤ r2` with density `e^{f}`.
fn half_annulus(f: &MetricField, r1: f64, r2: f64) -> Result<(f64, f64)> {
    let mut err = None;
    let mut inner_err = 0.0;
    let mut angular = |s: f64| -> f64 {
        // a failed inner integral aborts the outer one through a NaN
        if err.is_some() {
            return f64::NAN;
        }
        let r = s.exp();
        let res = integrate(
            |t| match f.v(Complex64::from_polar(r, t)) {
                Ok(v) => (v + 2.0 * s).exp(),
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            },
            0.0,
            PI,
            0.0,
            ANGLE_TOL,
        );
        match res {
            Ok(i) => {
                inner_err += i.error;
                i.value
            }
            Err(e) => {
                err.get_or_insert(e);
                f64::NAN
            }
        }
    };
    let outer = integrate(&mut angular, r1.ln(), r2.ln(), 0.0, RADIAL_TOL);
    if let Some(e) = err {
        return Err(e);
    }
    let outer = outer?;
    Ok((outer.value, outer.error + 1e-10 * outer.value.abs()))
}

/// Tail model fitted to the innermost ring sums.
#[derive(Debug, Clone, Copy)]
struct TailFit {
    /// Fitted on the last eight rings.
    tail: f64,
    rms: f64,
}

fn rms_residual(xs: &[f64], ys: &[f64]) -> f64 {
    let (m, b) = linear_fit(xs, ys);
    (xs.iter().zip(ys).map(|(x, y)| (y - m * x - b).powi(2)).sum::<f64>() / xs.len() as f64).sqrt()
}

/// `Σ_{j≥1} C (ℓ + j ln 2)^{−p}`, summed directly then closed by an integral.
fn algebraic_series(c: f64, p: f64, ell: f64) -> f64 {
    const TERMS: usize = 2000;
    let head: f64 = (1..=TERMS).map(|j| c * (ell + j as f64 * LN_2).powf(-p)).sum();
    head + c * (ell + (TERMS as f64 + 0.5) * LN_2).powf(1.0 - p) / ((p - 1.0) * LN_2)
}

fn geometric_tail(xs: &[f64], ys: &[f64]) -> f64 {
    // ln S = a + b ln r, successive rings shrink r by 2
    let (b, a) = linear_fit(xs, ys);
    let q = 2f64.powf(-b);
    let last = (a + b * xs[xs.len() - 1]).exp();
    if q < 1.0 {
        last * q / (1.0 - q)
    } else {
        f64::INFINITY
    }
}

fn algebraic_tail(ells: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = ells.iter().map(|l| l.ln()).collect();
    let (m, a) = linear_fit(&lx, ys);
    let p = -m;
    if p <= 1.0 {
        return f64::INFINITY;
    }
    algebraic_series(a.exp(), p, ells[ells.len() - 1])
}

/// Decay model for the angular integral `a(s)` below the deep band.
#[derive(Debug, Clone, Copy)]
enum DeepModel {
    /// `a ∝ |s|^{−q}`.
    Algebraic,
    /// `a ∝ e^{κ s}`.
    Geometric,
}

/// One quadrature band from `r_end` down to [`DEEP_FLOOR`], closed by the decay model
/// read off two probes of the angular integral. `None` when the field cannot be
/// evaluated that deep or the probes do not decay.
fn deep_band(field: &MetricField, r_end: f64, model: DeepModel) -> Option<(f64, f64)> {
    let s1 = DEEP_FLOOR.ln();
    let a1 = angular_integral(field, s1).ok()?;
    let a2 = angular_integral(field, s1 / 2.0).ok()?;
    if !(a1.is_finite() && a1 > 0.0 && a2.is_finite() && a2 > 0.0) {
        return None;
    }
    let beyond = match model {
        DeepModel::Algebraic => {
            let q = (a2 / a1).ln() / 2f64.ln();
            (q > 1.0).then(|| a1 * s1.abs() / (q - 1.0))?
        }
        DeepModel::Geometric => {
            let kappa = (a2 / a1).ln() / (s1.abs() / 2.0);
            (kappa > 0.0).then(|| a1 / kappa)?
        }
    };
    let (deep, deep_err) = half_annulus(field, DEEP_FLOOR, r_end).ok()?;
    deep.is_finite().then_some((deep + beyond, deep_err + 0.1 * beyond))
}

/// Tail of an algebraic decay in `|ln r|`, falling back to the fitted series alone.
fn algebraic_deep_tail(field: &MetricField, r_end: f64, ells: &[f64], ys: &[f64]) -> (f64, f64) {
    let series = algebraic_tail(ells, ys);
    let short = algebraic_tail(&ells[4..], &ys[4..]);
    let p = -linear_fit(&ells.iter().map(|l| l.ln()).collect::<Vec<_>>(), ys).0;
    let deep = if p > 1.0 { deep_band(field, r_end, DeepModel::Algebraic) } else { None };
    deep.unwrap_or((series, (series - short).abs()))
}

/// Geometric tail; slow decays are integrated down to [`DEEP_FLOOR`] instead of extrapolated.
fn geometric_deep_tail(field: &MetricField, r_end: f64, xs: &[f64], ys: &[f64]) -> (f64, f64) {
    const SLOW_RATIO: f64 = 0.5;
    let tail = geometric_tail(xs, ys);
    let short = geometric_tail(&xs[4..], &ys[4..]);
    let q = 2f64.powf(-linear_fit(xs, ys).0);
    let deep = if q > SLOW_RATIO { deep_band(field, r_end, DeepModel::Geometric) } else { None };
    deep.unwrap_or((tail, (tail - short).abs()))
}

/// When quadrature breaks down on an inner ring, the rings already summed can still show
/// divergence: at least six of them, each of the last four at least as large as the one before.
fn growing_before_failure(sums: &[f64], radius: f64, e: Error) -> Result<RegionIntegral> {
    let k = sums.len();
    if k < 6 || !sums[k - 5..].windows(2).all(|w| w[0] > 0.0 && w[1] >= w[0]) {
        return Err(e);
    }
    let xs: Vec<f64> = (k - 5..k).map(|j| (radius * 2f64.powi(-(j as i32)) * std::f64::consts::FRAC_1_SQRT_2).ln()).collect();
    let logs: Vec<f64> = sums[k - 5..].iter().map(|s| s.ln()).collect();
    Ok(RegionIntegral {
        value: f64::INFINITY,
        error: f64::INFINITY,
        divergent: true,
        radial_exponent: linear_fit(&xs, &logs).0,
        log_exponent: None,
        tail_ratio: sums[k - 1] / sums[k - 2],
        note: Some(format!("ring sums growing; quadrature failed below r = {:e}: {e}", radius * 2f64.powi(-(k as i32)))),
        ring_sums: sums.to_vec(),
    })
}

/// Integrates `e^v` over the half-disk of radius `radius` about the origin using dyadic
/// rings down to [`RING_FLOOR`], then classifies the tail.
pub fn half_disk_integral(field: &MetricField, radius: f64) -> Result<RegionIntegral> {
    let n = (radius / RING_FLOOR).log2().floor().max(8.0) as usize;
    let mut sums = Vec::with_capacity(n);
    let mut value = 0.0;
    let mut error = 0.0;
    let mut r = radius;
    for _ in 0..n {
        let (s, e) = match half_annulus(field, r / 2.0, r) {
            Ok(x) => x,
            Err(e) => return growing_before_failure(&sums, radius, e),
        };
        sums.push(s);
        value += s;
        error += e;
        r /= 2.0;
    }
    let last = &sums[n - 5..];
    let ratios: Vec<f64> = last.windows(2).map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 }).collect();
    let tail_ratio = *ratios.last().unwrap();
    let mids: Vec<f64> = (n - 8..n).map(|k| radius * 2f64.powi(-(k as i32)) * std::f64::consts::FRAC_1_SQRT_2).collect();
    let xs: Vec<f64> = mids.iter().map(|r| r.ln()).collect();
    let ells: Vec<f64> = xs.iter().map(|x| x.abs()).collect();
    let logs: Vec<f64> = sums[n - 8..].iter().map(|s| s.max(f64::MIN_POSITIVE).ln()).collect();
    let radial_exponent = linear_fit(&xs, &logs).0;
    let lls: Vec<f64> = ells.iter().map(|l| l.ln()).collect();
    let p = -linear_fit(&lls, &logs).0;
    let base = RegionIntegral {
        value,
        error,
        divergent: false,
        radial_exponent,
        log_exponent: None,
        tail_ratio,
        note: None,
        ring_sums: sums.clone(),
    };
    if last.iter().all(|s| *s == 0.0) {
        return Ok(base);
    }
    let geometric = ratios.iter().all(|q| *q < TAIL_RATIO);
    if geometric {
        let g = TailFit { tail: geometric_tail(&xs, &logs), rms: rms_residual(&xs, &logs) };
        let a = TailFit {
            tail: algebraic_tail(&ells, &logs),
            rms: rms_residual(&lls, &logs),
        };
        let algebraic = a.tail.is_finite() && a.rms < g.rms;
        let (tail, tail_err) = if algebraic {
            algebraic_deep_tail(field, r, &ells, &logs)
        } else {
            geometric_deep_tail(field, r, &xs, &logs)
        };
        return Ok(RegionIntegral {
            value: value + tail,
            error: error + tail_err,
            log_exponent: algebraic.then_some(p),
            note: algebraic.then(|| "algebraic tail in |ln r|, extrapolated".to_string()),
            ..base
        });
    }
    if p > 1.5 {
        let (tail, tail_err) = algebraic_deep_tail(field, r, &ells, &logs);
        return Ok(RegionIntegral {
            value: value + tail,
            error: error + tail_err,
            log_exponent: Some(p),
            note: Some("algebraic tail in |ln r|, extrapolated".to_string()),
            ..base
        });
    }
    Ok(RegionIntegral {
        value: f64::INFINITY,
        error: f64::INFINITY,
        divergent: true,
        log_exponent: Some(p),
        note: (p > 1.2).then(|| "slow-divergence, extrapolated".to_string()),
        ..base
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaReport {
    pub domain: Domain,
    pub value: f64,
    pub error: f64,
    pub divergent: bool,
    /// Ring-sum growth exponent of the first divergent region.
    pub growth_exponent: Option<f64>,
    pub note: Option<String>,
    pub regions: Vec<RegionIntegral>,
}

/// `∫ e^v` over a half-disk about the origin or over the whole half-plane; the latter is
/// split at `|z| = 1` and the outer part is integrated in the chart `w = −1/z`.
pub fn area(field: &MetricField, domain: Domain) -> Result<AreaReport> {
    let regions = match domain {
        Domain::HalfDisk { radius } => {
            if !(radius > 0.0) {
                return Err(Error::DomainError(format!("radius {radius} must be positive")));
            }
            vec![half_disk_integral(field, radius)?]
        }
        Domain::HalfPlane => vec![half_disk_integral(field, 1.0)?, half_disk_integral(&field.inverted(), 1.0)?],
    };
    let divergent = regions.iter().any(|r| r.divergent);
    let first_div = regions.iter().find(|r| r.divergent);
    Ok(AreaReport {
        domain,
        value: if divergent { f64::INFINITY } else { regions.iter().map(|r| r.value).sum() },
        error: regions.iter().map(|r| r.error).sum(),
        divergent,
        growth_exponent: first_div.map(|r| r.log_exponent.unwrap_or(r.radial_exponent)),
        note: regions.iter().find_map(|r| r.note.clone()),
        regions,
    })
}

/// Area of `r1 ≤ |z| ≤ r2` computed directly or through the chart `w = −1/z`.
pub fn annulus_area(field: &MetricField, r1: f64, r2: f64, chart: Chart) -> Result<f64> {
    Ok(match chart {
        Chart::Direct => half_annulus(field, r1, r2)?.0,
        Chart::Inverted => half_annulus(&field.inverted(), 1.0 / r2, 1.0 / r1)?.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Curvature;

    fn sphere() -> MetricField {
        MetricField::new(Curvature::Spherical, vec![], |z: Complex64| Ok((4.0 / (1.0 + z.norm_sqr()).powi(2)).ln()))
    }

    #[test]
    fn sphere_half_plane() {
        let a = area(&sphere(), Domain::HalfPlane).unwrap();
        assert!(!a.divergent);
        assert!((a.value - 2.0 * PI).abs() < 1e-9, "{}", a.value);
    }

    #[test]
    fn sphere_semicircle() {
        assert!((semicircle_length(&sphere(), 1.0).unwrap() - PI).abs() < 1e-12);
        let r: f64 = 0.3;
        assert!((semicircle_length(&sphere(), r).unwrap() - 2.0 * PI * r / (1.0 + r * r)).abs() < 1e-12);
    }

    #[test]
    fn flat_plane_diverges() {
        let f = MetricField::new(Curvature::Flat, vec![], |_| Ok(4f64.ln()));
        let a = area(&f, Domain::HalfPlane).unwrap();
        assert!(a.divergent);
        let d = area(&f, Domain::HalfDisk { radius: 1.0 }).unwrap();
        assert!(!d.divergent && (d.value - 2.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn log_like_tails() {
        // 1/(r² ℓ²) is integrable, 1/r² is not
        let two = MetricField::new(Curvature::Flat, vec![0.0], |z: Complex64| {
            let r = z.norm();
            Ok(-2.0 * r.ln() - 2.0 * (1.0 - r.ln()).ln())
        });
        let a = area(&two, Domain::HalfDisk { radius: 0.5 }).unwrap();
        assert!(!a.divergent, "{a:?}");
        // exact: π ∫ dr/(r (1 − ln r)²) over (0, 1/2) = π/(1 + ln 2)
        assert!((a.value - PI / (1.0 + LN_2)).abs() < 1e-4 * a.value, "{}", a.value);
        let one = MetricField::new(Curvature::Flat, vec![0.0], |z: Complex64| Ok(-2.0 * z.norm().ln()));
        assert!(area(&one, Domain::HalfDisk { radius: 0.5 }).unwrap().divergent);
    }

    #[test]
    fn chart_invariance() {
        let f = sphere();
        let a = annulus_area(&f, 0.5, 3.0, Chart::Direct).unwrap();
        let b = annulus_area(&f, 0.5, 3.0, Chart::Inverted).unwrap();
        assert!((a - b).abs() < 1e-9 * a);
    }
}
