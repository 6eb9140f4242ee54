//! Circular polygons traced by developing maps of polygonal metrics, vertex angles,
//! partial Alexandrov-embeddedness certificates and the two-pole accessory fit.

mod certificate;

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use certificate::{
    alexandrov_partial_check, segment_crossings, shoelace_area, winding_number, Certificate, GaugedMap,
};

use crate::developing::{developing_map_numeric, fit_samples};
use crate::error::{Error, Result};
use crate::geometry::{geodesic_curvature, ChartJet, ComplexPt, Curvature, GeneralizedCircle, Mobius, SphereMap};
use crate::quadrature::bisect;
use crate::schwarzian::{validate_spec, SchwarzianSpec};
use crate::verification::{neumann_residual, MetricField};

/// Interior angle `π√(1 − 2α)` at a vertex with double-pole coefficient `α ≤ 1/2`.
pub fn vertex_angle(alpha: f64) -> Result<f64> {
    if !(alpha <= 0.5) {
        return Err(Error::DomainError(format!("alpha = {alpha} exceeds 1/2")));
    }
    Ok(PI * (1.0 - 2.0 * alpha).sqrt())
}

fn default_curvature() -> Curvature {
    Curvature::Spherical
}

/// Schwarzian data of a polygonal metric together with the gauge applied to its
/// developing map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonalMetricSpec {
    #[serde(rename = "K", default = "default_curvature")]
    pub k: Curvature,
    #[serde(flatten)]
    pub schwarzian: SchwarzianSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge: Option<Mobius<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint: Option<[f64; 2]>,
}

impl PolygonalMetricSpec {
    pub fn new(schwarzian: SchwarzianSpec) -> Self {
        PolygonalMetricSpec { k: Curvature::Spherical, schwarzian, gauge: None, basepoint: None }
    }

    pub fn with_gauge(mut self, m: Mobius<f64>) -> Self {
        self.gauge = Some(m);
        self
    }

    pub fn gauge(&self) -> Mobius<f64> {
        self.gauge.unwrap_or_else(Mobius::identity)
    }

    fn basepoint(&self) -> Complex64 {
        match self.basepoint {
            Some([x, y]) => Complex64::new(x, y),
            None => {
                let qs = self.schwarzian.pole_list();
                let mid = qs.iter().map(|p| p.q).sum::<f64>() / qs.len().max(1) as f64;
                Complex64::new(mid, 1.0)
            }
        }
    }

    /// The gauged developing map.
    pub fn developing_map(&self) -> Result<GaugedMap> {
        Ok(GaugedMap { map: developing_map_numeric(&self.schwarzian, self.basepoint())?, gauge: self.gauge() })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonArc {
    pub circle: GeneralizedCircle<f64>,
    pub start: ComplexPt<f64>,
    pub end: ComplexPt<f64>,
    /// Boundary interval of the half-plane; `None` stands for `∓∞`.
    pub interval: [Option<f64>; 2],
    /// `+1` when the arc runs counterclockwise on its circle (along `i(Aζ + B)`).
    pub orientation: i8,
    pub fit_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonVertex {
    pub point: ComplexPt<f64>,
    /// Preimage on the real axis; `None` for `∞`.
    pub at: Option<f64>,
    pub alpha: f64,
    pub angle: f64,
    /// Angle between the adjacent arcs measured from their tangents, in `[0, π]`.
    pub measured_angle: f64,
    pub ideal: bool,
}

impl PolygonVertex {
    /// Distance of the measured angle from the nominal one folded into `[0, π]`, the range
    /// tangent directions can resolve.
    pub fn angle_deviation(&self) -> f64 {
        let t = self.angle.rem_euclid(2.0 * PI);
        let folded = if t > PI { 2.0 * PI - t } else { t };
        (self.measured_angle - folded).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImmersedCircularPolygon {
    #[serde(rename = "K")]
    pub k: Curvature,
    pub arcs: Vec<PolygonArc>,
    /// `vertices[j]` is the end of `arcs[j]` and the start of `arcs[j + 1]`.
    pub vertices: Vec<PolygonVertex>,
    /// Dense boundary samples per arc.
    #[serde(skip)]
    pub trace: Vec<Vec<(f64, ComplexPt<f64>)>>,
}

impl ImmersedCircularPolygon {
    /// Largest chordal distance of an arc endpoint from its circle.
    pub fn closure_residual(&self) -> f64 {
        self.arcs
            .iter()
            .map(|a| a.circle.chordal_distance(a.start).max(a.circle.chordal_distance(a.end)))
            .fold(0.0, f64::max)
    }

    pub fn max_fit_residual(&self) -> f64 {
        self.arcs.iter().map(|a| a.fit_residual).fold(0.0, f64::max)
    }

    /// Image of the polygon under a Möbius map.
    pub fn transform(&self, m: &Mobius<f64>) -> Result<Self> {
        let arcs = self
            .arcs
            .iter()
            .map(|a| {
                Ok(PolygonArc {
                    circle: a.circle.transform(m)?,
                    start: m.apply(a.start),
                    end: m.apply(a.end),
                    ..a.clone()
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let vertices = self.vertices.iter().map(|v| PolygonVertex { point: m.apply(v.point), ..v.clone() }).collect();
        let trace = self.trace.iter().map(|t| t.iter().map(|(s, p)| (*s, m.apply(*p))).collect()).collect();
        Ok(ImmersedCircularPolygon { k: self.k, arcs, vertices, trace })
    }

    /// Problems with the structural invariants, empty when none.
    pub fn invariant_violations(&self, tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.arcs.len();
        for (j, a) in self.arcs.iter().enumerate() {
            let next = &self.arcs[(j + 1) % n];
            if a.end.chordal_distance(&next.start) > tol {
                out.push(format!("arcs {j} and {} do not share an endpoint", (j + 1) % n));
            }
            if a.fit_residual > tol {
                out.push(format!("arc {j} leaves its circle by {:e}", a.fit_residual));
            }
        }
        if self.k == Curvature::Hyperbolic {
            for (j, v) in self.vertices.iter().filter(|v| v.ideal).enumerate() {
                if (v.point.finite().map_or(f64::INFINITY, |p| p.norm()) - 1.0).abs() > tol {
                    out.push(format!("ideal vertex {j} is off the unit circle"));
                }
                if v.measured_angle > 1e-6 {
                    out.push(format!("ideal vertex {j} is not tangential"));
                }
            }
            for (j, a) in self.arcs.iter().enumerate() {
                if is_horocycle(&a.circle, tol) {
                    out.push(format!("arc {j} lies on a horocycle"));
                }
            }
        }
        out
    }

    /// Dense boundary samples as CSV with columns `arc,s,x,y`.
    pub fn boundary_csv(&self) -> String {
        let mut out = String::from("arc,s,x,y\n");
        for (j, t) in self.trace.iter().enumerate() {
            for (s, p) in t {
                if let Some(z) = p.finite() {
                    writeln!(out, "{j},{s:e},{:e},{:e}", z.re, z.im).expect("string write");
                }
            }
        }
        out
    }
}

/// Circle internally tangent to the unit circle.
pub fn is_horocycle(c: &GeneralizedCircle<f64>, tol: f64) -> bool {
    match (c.center(), c.radius()) {
        (Some(o), Some(r)) => (o.norm() + r - 1.0).abs() <= tol && r < 1.0,
        _ => false,
    }
}

/// Polygon together with the per-interval boundary constants measured two ways.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonReport {
    pub polygon: ImmersedCircularPolygon,
    pub closure_residual: f64,
    pub fit_residual: f64,
    /// Neumann constants fitted from the pulled-back density on each interval.
    pub boundary_constants: Vec<f64>,
    /// `−2 k_g` of each arc, from finite differences of the boundary trace.
    pub curvature_constants: Vec<f64>,
}

const ARC_SAMPLES: usize = 41;

/// Real-axis parameter of the sample `u ∈ (0, 1)` on an interval with optional infinite ends.
fn interval_point(lo: Option<f64>, hi: Option<f64>, scale: f64, u: f64) -> f64 {
    match (lo, hi) {
        (Some(a), Some(b)) => a + (b - a) * u,
        (Some(a), None) => a + scale * u / (1.0 - u),
        (None, Some(b)) => b - scale * (1.0 - u) / u,
        (None, None) => scale * (u - 0.5) / (u * (1.0 - u)),
    }
}

/// Tangent direction of a generalized circle at one of its points, counterclockwise.
fn circle_tangent(c: &GeneralizedCircle<f64>, p: Complex64) -> Complex64 {
    Complex64::i() * (p * c.a + c.b)
}

/// Unsigned angle between the two arcs leaving a vertex, measured in a chart where the
/// vertex is finite and near the origin.
fn measure_angle(vertex: ComplexPt<f64>, arcs: [(&GeneralizedCircle<f64>, ComplexPt<f64>); 2]) -> Result<f64> {
    let flip = match vertex.finite() {
        Some(p) => p.norm() > 1.0,
        None => true,
    };
    let chart = if flip { Mobius::inversion() } else { Mobius::identity() };
    let p = chart.apply(vertex).finite().expect("vertex mapped into the unit disk");
    let mut dirs = [Complex64::new(0.0, 0.0); 2];
    for (k, (circle, near)) in arcs.iter().enumerate() {
        let c = circle.transform(&chart)?;
        let q = chart
            .apply(*near)
            .finite()
            .ok_or_else(|| Error::FitFailure("sample next to a vertex is infinite".into()))?;
        let mut t = circle_tangent(&c, p);
        if (t.conj() * (q - p)).re < 0.0 {
            t = -t;
        }
        dirs[k] = t / t.norm();
    }
    Ok((dirs[0].conj() * dirs[1]).re.clamp(-1.0, 1.0).acos())
}

fn value(map: &GaugedMap, s: f64) -> Result<ComplexPt<f64>> {
    Ok(map.chart_jet(Complex64::new(s, 0.0))?.value())
}

/// Checks that `g(q ± ε)` approaches the vertex image as `ε` shrinks.
fn check_vertex_limit(map: &GaugedMap, q: f64, vertex: ComplexPt<f64>, scale: f64) -> Result<()> {
    let mut trace = Vec::new();
    for side in [-1.0, 1.0] {
        let d: Vec<f64> = (2..=6)
            .map(|k| value(map, q + side * scale * 10f64.powi(-k)).map(|p| p.chordal_distance(&vertex)))
            .collect::<Result<_>>()?;
        trace.extend(d.iter().copied());
        if d.windows(2).any(|w| w[1] > w[0] * (1.0 + 1e-6) + 1e-12) {
            return Err(Error::VertexLimitNonconvergent(format!("q = {q}: chordal distances {trace:?}")));
        }
    }
    Ok(())
}

/// Traces the boundary of the half-plane under the developing map of a K = 1 polygonal
/// metric, fits a circle per interval and measures vertex angles and boundary constants.
pub fn polygon_from_spec(spec: &PolygonalMetricSpec) -> Result<PolygonReport> {
    if spec.k != Curvature::Spherical {
        return Err(Error::UnsupportedVariant(format!("polygon synthesis needs K = 1, got {}", spec.k)));
    }
    let report = validate_spec(&spec.schwarzian);
    if let Some(reason) = report.validity.reason() {
        return Err(Error::ConstraintViolation(reason.to_string()));
    }
    let map = spec.developing_map()?;
    let numeric = map.map.numeric().expect("numeric map");
    let poles = spec.schwarzian.pole_list();
    let qs: Vec<f64> = poles.iter().map(|p| p.q).collect();
    let m = qs.len();
    let gap = qs.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let scale = if gap.is_finite() { gap } else { 1.0 };

    // vertices: poles in order, then infinity
    let mut vpoints = Vec::with_capacity(m + 1);
    for (i, q) in qs.iter().enumerate() {
        let v = spec.gauge().apply(numeric.vertex(i)?);
        check_vertex_limit(&map, *q, v, scale)?;
        vpoints.push(v);
    }
    vpoints.push(spec.gauge().apply(numeric.vertex_infinity()?));

    let bounds = |j: usize| -> [Option<f64>; 2] {
        [if j == 0 { None } else { Some(qs[j - 1]) }, if j == m { None } else { Some(qs[j]) }]
    };
    let mut arcs = Vec::with_capacity(m + 1);
    let mut trace = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let [lo, hi] = bounds(j);
        let samples: Vec<(f64, ComplexPt<f64>)> = (0..ARC_SAMPLES)
            .map(|i| {
                let u = 0.5 * (1.0 - (PI * (i as f64 + 0.5) / ARC_SAMPLES as f64).cos());
                let s = interval_point(lo, hi, scale, u);
                Ok((s, value(&map, s)?))
            })
            .collect::<Result<_>>()?;
        let pts: Vec<ComplexPt<f64>> = samples.iter().map(|x| x.1).collect();
        let fit = fit_samples(&pts).map_err(|e| Error::FitFailure(format!("interval {j}: {e}")))?;
        // arc j runs from vertex j − 1 (or ∞) to vertex j (or ∞)
        let start = if j == 0 { vpoints[m] } else { vpoints[j - 1] };
        let end = vpoints[j];
        // orientation from the first two samples in a chart where they are finite
        let orientation = {
            let (p0, p1) = (pts[0], pts[1]);
            let chart = if p0.finite().is_none_or(|p| p.norm() > 1.0) { Mobius::inversion() } else { Mobius::identity() };
            let c = fit.circle.transform(&chart)?;
            match (chart.apply(p0).finite(), chart.apply(p1).finite()) {
                (Some(a), Some(b)) => {
                    let t = circle_tangent(&c, a);
                    let ccw = (t.conj() * (b - a)).re > 0.0;
                    // inversion reverses orientation on the sphere
                    if ccw != (chart != Mobius::identity()) {
                        1
                    } else {
                        -1
                    }
                }
                _ => 1,
            }
        };
        arcs.push(PolygonArc { circle: fit.circle, start, end, interval: [lo, hi], orientation, fit_residual: fit.residual });
        trace.push(samples);
    }

    // vertex j joins arc j (ending) and arc j + 1 (starting); infinity joins arc m and arc 0
    let mut vertices = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let (left, right) = if j < m { (j, j + 1) } else { (m, 0) };
        let near_left = trace[left][ARC_SAMPLES - 1].1;
        let near_right = trace[right][0].1;
        let measured = measure_angle(vpoints[j], [(&arcs[left].circle, near_left), (&arcs[right].circle, near_right)])?;
        let alpha = if j < m { poles[j].alpha } else { spec.schwarzian.alpha_infinity() };
        vertices.push(PolygonVertex {
            point: vpoints[j],
            at: (j < m).then(|| qs[j]),
            alpha,
            angle: vertex_angle(alpha)?,
            measured_angle: measured,
            ideal: false,
        });
    }
    let field = gauged_field(&map, qs.clone());
    let mut boundary_constants = Vec::with_capacity(m + 1);
    let mut curvature_constants = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let iv = match bounds(j) {
            [Some(a), Some(b)] => [a + 0.25 * (b - a), b - 0.25 * (b - a)],
            [Some(a), None] => [a + 0.5 * scale, a + 2.0 * scale],
            [None, Some(b)] => [b - 2.0 * scale, b - 0.5 * scale],
            [None, None] => [-2.0 * scale, 2.0 * scale],
        };
        boundary_constants.push(neumann_residual(&field, iv, None)?.fitted_c);
        curvature_constants.push(-2.0 * arc_curvature(&map, iv, scale)?);
    }

    let polygon = ImmersedCircularPolygon { k: spec.k, arcs, vertices, trace };
    Ok(PolygonReport {
        closure_residual: polygon.closure_residual(),
        fit_residual: polygon.max_fit_residual(),
        polygon,
        boundary_constants,
        curvature_constants,
    })
}

/// Pulled-back spherical density of a gauged map.
fn gauged_field(map: &GaugedMap, singular: Vec<f64>) -> MetricField {
    let map = map.clone();
    MetricField::new(Curvature::Spherical, singular, move |z| {
        let j: ChartJet<f64> = map.chart_jet(z)?;
        j.log_density(1.0).ok_or_else(|| Error::CriticalPoint(j.jet.f1.norm()))
    })
}

/// Geodesic curvature of the boundary trace at a point of `iv` where the image is finite
/// and moderate.
fn arc_curvature(map: &GaugedMap, iv: [f64; 2], scale: f64) -> Result<f64> {
    let mut last = Err(Error::FitFailure("no finite sample on the interval".into()));
    for t in [0.5, 0.3, 0.7, 0.1, 0.9] {
        let s = iv[0] + (iv[1] - iv[0]) * t;
        let ok = value(map, s)?.finite().is_some_and(|p| p.norm() < 1e2);
        if !ok {
            continue;
        }
        let curve = |x: f64| value(map, x).ok().and_then(|p| p.finite()).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        for hf in [1e-2, 3e-3, 1e-3] {
            last = geodesic_curvature(curve, Curvature::Spherical, s, hf * scale, 1e-6);
            if last.is_ok() {
                return last;
            }
        }
    }
    last
}

/// Result of the two-pole accessory fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccessoryFit {
    pub beta1: f64,
    pub beta2: f64,
    pub alpha_infinity: f64,
    pub residual: f64,
}

/// Finds `β = β1 = −β2` with `α1 + α2 + (q1 − q2)β` equal to the target residue at `∞`,
/// within the admissible region where that residue is at most `1/2`.
pub fn fit_accessory(q: [f64; 2], alpha: [f64; 2], target_alpha_infinity: f64) -> Result<AccessoryFit> {
    let [q1, q2] = q;
    if alpha.iter().any(|a| !(*a <= 0.5)) {
        return Err(Error::DomainError(format!("alphas {alpha:?} must not exceed 1/2")));
    }
    if !(q1 != q2) {
        return Err(Error::DomainError("poles must be distinct".into()));
    }
    let slope = q1 - q2;
    let alpha_inf = |b: f64| alpha[0] + alpha[1] + slope * b;
    let objective = |b: f64| alpha_inf(b) - target_alpha_infinity;
    // admissible region is a half-line ending where the residue at ∞ reaches 1/2
    let edge = (0.5 - alpha[0] - alpha[1]) / slope;
    let dir = -slope.signum();
    let mut width = 1.0 + edge.abs();
    let mut far = edge + dir * width;
    let f_edge = objective(edge);
    for _ in 0..64 {
        if f_edge == 0.0 || objective(far).signum() != f_edge.signum() {
            break;
        }
        width *= 2.0;
        far = edge + dir * width;
    }
    let (lo, hi) = if edge < far { (edge, far) } else { (far, edge) };
    let beta = bisect(objective, lo, hi, 1e-10)?;
    Ok(AccessoryFit { beta1: beta, beta2: -beta, alpha_infinity: alpha_inf(beta), residual: objective(beta).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schwarzian::Pole;

    #[test]
    fn angle_law() {
        assert!((vertex_angle(0.0).unwrap() - PI).abs() < 1e-15);
        assert_eq!(vertex_angle(0.5).unwrap(), 0.0);
        assert!((vertex_angle(0.375).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!(vertex_angle(0.6).is_err());
    }

    #[test]
    fn accessory_examples() {
        let f = fit_accessory([-1.0, 1.0], [0.25, 0.25], 0.5).unwrap();
        assert!(f.beta1.abs() < 1e-10);
        let f = fit_accessory([-1.0, 1.0], [0.25, 0.25], 0.3).unwrap();
        assert!((f.beta1 - 0.1).abs() < 1e-10, "{f:?}");
        assert!(matches!(fit_accessory([-1.0, 1.0], [0.25, 0.25], 0.6), Err(Error::NoBracket { .. })));
    }

    #[test]
    fn lune() {
        let spec = PolygonalMetricSpec::new(SchwarzianSpec::poles(vec![Pole { q: 0.0, alpha: 0.375, beta: 0.0 }]));
        let r = polygon_from_spec(&spec).unwrap();
        assert_eq!(r.polygon.arcs.len(), 2);
        for v in &r.polygon.vertices {
            assert!((v.measured_angle - PI / 2.0).abs() < 1e-3, "{v:?}");
        }
        assert!(r.fit_residual <= 1e-8, "{}", r.fit_residual);
        assert!(r.closure_residual <= 1e-6);
        assert!(r.polygon.invariant_violations(1e-6).is_empty());
    }

    #[test]
    fn spec_json_shape() {
        let s: PolygonalMetricSpec = serde_json::from_str(r#"{"poles":[{"q":0,"alpha":0.375,"beta":0}]}"#).unwrap();
        assert_eq!(s.k, Curvature::Spherical);
        assert_eq!(s.schwarzian.pole_list().len(), 1);
    }
}
