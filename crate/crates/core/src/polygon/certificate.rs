use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ImmersedCircularPolygon;
use crate::developing::DevelopingMap;
use crate::error::Result;
use crate::geometry::{ChartJet, ComplexPt, Mobius, SphereMap};

/// A developing map followed by a fixed Möbius gauge.
#[derive(Debug, Clone)]
pub struct GaugedMap {
    pub map: DevelopingMap,
    pub gauge: Mobius<f64>,
}

impl SphereMap<f64> for GaugedMap {
    fn chart_jet(&self, z: Complex64) -> Result<ChartJet<f64>> {
        Ok(self.gauge.apply_jet(&self.map.chart_jet(z)?))
    }
}

/// What was checked towards Alexandrov embeddedness, and the outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// `|g'| > 0` at every interior sample.
    pub local_diffeomorphism: bool,
    pub interior_samples: usize,
    pub min_spherical_derivative: f64,
    /// Arcs regular away from vertices and on their circles.
    pub boundary_regular: bool,
    pub min_boundary_derivative: f64,
    pub self_crossings: usize,
    /// Traversal direction agrees with the side the interior lands on.
    pub orientation_consistent: bool,
    /// All three conditions hold and the trace is embedded.
    pub full: bool,
    pub flags: Vec<String>,
}

const DERIVATIVE_FLOOR: f64 = 1e-9;

/// Proper crossings between non-adjacent segments of a closed polyline.
pub fn segment_crossings(pts: &[Complex64]) -> usize {
    let n = pts.len();
    let cross = |a: Complex64, b: Complex64| a.re * b.im - a.im * b.re;
    let mut count = 0;
    for i in 0..n {
        let (p1, p2) = (pts[i], pts[(i + 1) % n]);
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (q1, q2) = (pts[j], pts[(j + 1) % n]);
            let d1 = cross(p2 - p1, q1 - p1);
            let d2 = cross(p2 - p1, q2 - p1);
            let d3 = cross(q2 - q1, p1 - q1);
            let d4 = cross(q2 - q1, p2 - q1);
            if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
                count += 1;
            }
        }
    }
    count
}

/// Signed area of a closed polyline, positive for counterclockwise traversal.
pub fn shoelace_area(pts: &[Complex64]) -> f64 {
    let n = pts.len();
    (0..n).map(|i| (pts[i].conj() * pts[(i + 1) % n]).im).sum::<f64>() / 2.0
}

/// Winding number of a closed polyline around `w`.
pub fn winding_number(pts: &[Complex64], w: Complex64) -> i64 {
    let n = pts.len();
    let total: f64 = (0..n).map(|i| ((pts[(i + 1) % n] - w) / (pts[i] - w)).arg()).sum();
    (total / std::f64::consts::TAU).round() as i64
}

fn sphere_directions() -> Vec<[f64; 3]> {
    let mut v = Vec::new();
    for x in [-1.0f64, 0.0, 1.0] {
        for y in [-1.0f64, 0.0, 1.0] {
            for z in [-1.0f64, 0.0, 1.0] {
                let n = (x * x + y * y + z * z).sqrt();
                if n > 0.0 {
                    v.push([x / n, y / n, z / n]);
                }
            }
        }
    }
    v
}

/// Partial certificate: local diffeomorphism at interior samples, regular boundary arcs,
/// and for an embedded trace, orientation consistency with the interior.
pub fn alexandrov_partial_check<G: SphereMap<f64>>(g: &G, poly: &ImmersedCircularPolygon, density: usize) -> Certificate {
    let mut flags = Vec::new();
    let qs: Vec<f64> = poly.vertices.iter().filter_map(|v| v.at).collect();
    let (qlo, qhi) = qs.iter().fold((0.0f64, 0.0f64), |(a, b), q| (a.min(*q), b.max(*q)));
    let (lo, hi) = (qlo - 3.0, qhi + 3.0);
    let density = density.max(2);
    let half = density / 2;

    let mut min_d = f64::INFINITY;
    let mut samples = 0;
    for i in 0..=density {
        for j in 1..=half {
            let z = Complex64::new(lo + (hi - lo) * i as f64 / density as f64, 3.0 * j as f64 / half as f64);
            samples += 1;
            let d = g.chart_jet(z).map(|c| c.spherical_derivative()).unwrap_or(0.0);
            min_d = min_d.min(d);
        }
    }
    let local = min_d > DERIVATIVE_FLOOR;
    if !local {
        flags.push("CriticalPoint".to_string());
    }

    let mut min_b = f64::INFINITY;
    for arc in &poly.trace {
        for (s, _) in arc {
            let d = g.chart_jet(Complex64::new(*s, 0.0)).map(|c| c.spherical_derivative()).unwrap_or(0.0);
            min_b = min_b.min(d);
        }
    }
    let boundary = min_b > DERIVATIVE_FLOOR && poly.max_fit_residual() <= 1e-6;
    if !boundary {
        flags.push("IrregularBoundary".to_string());
    }

    // closed trace through the vertices, in a chart where it is bounded
    let mut ring: Vec<ComplexPt<f64>> = Vec::new();
    for (j, arc) in poly.trace.iter().enumerate() {
        ring.push(poly.arcs[j].start);
        ring.extend(arc.iter().map(|x| x.1));
    }
    let far = sphere_directions()
        .into_iter()
        .map(ComplexPt::from_sphere)
        .max_by(|a, b| {
            let da = ring.iter().map(|p| p.chordal_distance(a)).fold(f64::INFINITY, f64::min);
            let db = ring.iter().map(|p| p.chordal_distance(b)).fold(f64::INFINITY, f64::min);
            da.total_cmp(&db)
        })
        .expect("nonempty direction set");
    let rot = match far.finite() {
        Some(p) => Mobius::new(p.conj(), Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), p).expect("unitary"),
        None => Mobius::identity(),
    };
    let pts: Vec<Complex64> = ring.iter().filter_map(|p| rot.apply(*p).finite()).collect();
    let crossings = segment_crossings(&pts);
    if crossings > 0 {
        flags.push("SelfIntersecting".to_string());
    }
    let mid = if qs.is_empty() { 0.0 } else { qs.iter().sum::<f64>() / qs.len() as f64 };
    let inside = g.chart_jet(Complex64::new(mid, 1.0)).ok().and_then(|c| rot.apply(c.value()).finite());
    let orientation_consistent = match inside {
        Some(w) => {
            let area = shoelace_area(&pts);
            let wn = winding_number(&pts, w);
            (area > 0.0 && wn == 1) || (area < 0.0 && wn == 0)
        }
        None => false,
    };
    let full = local && boundary && crossings == 0 && orientation_consistent;
    Certificate {
        local_diffeomorphism: local,
        interior_samples: samples,
        min_spherical_derivative: min_d,
        boundary_regular: boundary,
        min_boundary_derivative: min_b,
        self_crossings: crossings,
        orientation_consistent,
        full,
        flags,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polyline_tools() {
        let square = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(1.0, 1.0), Complex64::new(0.0, 1.0)];
        assert_eq!(segment_crossings(&square), 0);
        assert!((shoelace_area(&square) - 1.0).abs() < 1e-15);
        assert_eq!(winding_number(&square, Complex64::new(0.5, 0.5)), 1);
        assert_eq!(winding_number(&square, Complex64::new(2.0, 0.5)), 0);
        let bow = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 1.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        assert_eq!(segment_crossings(&bow), 1);
    }
}
