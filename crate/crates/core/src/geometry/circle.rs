use serde::{Deserialize, Serialize};

use super::mobius::Mobius;
use super::point::ComplexPt;
use crate::error::{Error, Result};
use crate::scalar::{cx, Cx, Real};

/// The generalized circle `{z : A|z|² + 2 Re(B̄ z) + D = 0}`, lines included (`A = 0`).
///
/// Stored in canonical scaling: `|B|² − AD = 1`, `A ≥ 0`, and for lines `B` lies in the
/// half-plane `Re B > 0` (or on the positive imaginary axis).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct GeneralizedCircle<T> {
    pub a: T,
    pub b: Cx<T>,
    pub d: T,
}

/// How two generalized circles meet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub enum IntersectionResult<T> {
    TwoPoints(ComplexPt<T>, ComplexPt<T>),
    Tangent(ComplexPt<T>),
    Disjoint,
    Equal,
}

impl<T> IntersectionResult<T> {
    pub fn tag(&self) -> &'static str {
        match self {
            IntersectionResult::TwoPoints(..) => "two_points",
            IntersectionResult::Tangent(_) => "tangent",
            IntersectionResult::Disjoint => "disjoint",
            IntersectionResult::Equal => "equal",
        }
    }
}

impl<T: Real> GeneralizedCircle<T> {
    pub fn new(a: T, b: Cx<T>, d: T) -> Result<Self> {
        let s = b.norm_sqr() - a * d;
        let scale = a.abs().max(b.norm()).max(d.abs());
        if !(s > T::epsilon() * scale * scale) || !s.is_finite() {
            return Err(Error::DegenerateInput(format!("|B|^2 - AD = {s} is not positive")));
        }
        let k = s.sqrt().recip();
        let (mut a, mut b, mut d) = (a * k, b * k, d * k);
        if a.abs() <= T::epsilon() * T::lit(16.0) {
            let nb = b.norm();
            a = T::zero();
            b = b / nb;
            d = d / nb;
        }
        let flip = a < T::zero()
            || (a == T::zero() && (b.re < T::zero() || (b.re == T::zero() && b.im < T::zero())));
        if flip {
            a = -a;
            b = -b;
            d = -d;
        }
        Ok(GeneralizedCircle { a, b, d })
    }

    /// Circle with the given center and radius.
    pub fn from_center_radius(center: Cx<T>, r: T) -> Result<Self> {
        GeneralizedCircle::new(T::one(), -center, center.norm_sqr() - r * r)
    }

    pub fn is_line(&self) -> bool {
        self.a == T::zero()
    }

    pub fn center(&self) -> Option<Cx<T>> {
        (!self.is_line()).then(|| -self.b / self.a)
    }

    pub fn radius(&self) -> Option<T> {
        (!self.is_line()).then(|| self.a.recip())
    }

    /// Value of the Hermitian form at the point normalized to unit homogeneous length.
    pub fn hermitian_residual(&self, p: ComplexPt<T>) -> T {
        let (x, y) = p.homogeneous();
        let n = x.norm_sqr() + y.norm_sqr();
        let v = self.a * x.norm_sqr()
            + T::lit(2.0) * (self.b.conj() * x * y.conj()).re
            + self.d * y.norm_sqr();
        v / n
    }

    /// Unit normal and offset of the plane cutting the unit sphere along this circle:
    /// `n·X + e = 0`, with `|n|² − e² = 1`.
    pub fn sphere_plane(&self) -> ([T; 3], T) {
        let half = T::lit(0.5);
        ([self.b.re, self.b.im, (self.a - self.d) * half], (self.a + self.d) * half)
    }

    /// Chordal distance from a point to the circle, measured on the unit sphere.
    pub fn chordal_distance(&self, p: ComplexPt<T>) -> T {
        let x = p.to_sphere();
        let (n, e) = self.sphere_plane();
        let nn = dot(&n, &n).sqrt();
        let u = [n[0] / nn, n[1] / nn, n[2] / nn];
        let s = dot(&u, &x) + e / nn;
        let c0 = [-u[0] * e / nn, -u[1] * e / nn, -u[2] * e / nn];
        let proj = [x[0] - s * u[0] - c0[0], x[1] - s * u[1] - c0[1], x[2] - s * u[2] - c0[2]];
        let dr = dot(&proj, &proj).sqrt() - nn.recip();
        (s * s + dr * dr).sqrt()
    }

    /// Point at parameter `t ∈ [0, 2π)`; lines pass through `∞` at `t = 0`.
    pub fn point_at(&self, t: T) -> ComplexPt<T> {
        match (self.center(), self.radius()) {
            (Some(c), Some(r)) => ComplexPt::Finite(c + cx(t.cos(), t.sin()) * r),
            _ => {
                let half = T::lit(0.5);
                let nb = self.b.norm();
                let foot = -self.b * (self.d * half / (nb * nb));
                let dir = cx(-self.b.im, self.b.re) / nb;
                let s = (t * half).sin();
                if s == T::zero() {
                    ComplexPt::Infinity
                } else {
                    ComplexPt::Finite(foot + dir * ((t * half).cos() / s))
                }
            }
        }
    }

    /// Image under a Möbius map: the Hermitian matrix transforms as `N* H N` with `N = M⁻¹`.
    pub fn transform(&self, m: &Mobius<T>) -> Result<Self> {
        let n = m.inverse();
        let (a, b, d) = (cx(self.a, T::zero()), self.b, cx(self.d, T::zero()));
        // H = [[a, b], [b̄, d]], N = [[p, q], [r, s]]
        let (p, q, r, s) = (n.a, n.b, n.c, n.d);
        let h11 = p.conj() * (a * p + b * r) + r.conj() * (b.conj() * p + d * r);
        let h12 = p.conj() * (a * q + b * s) + r.conj() * (b.conj() * q + d * s);
        let h22 = q.conj() * (a * q + b * s) + s.conj() * (b.conj() * q + d * s);
        GeneralizedCircle::new(h11.re, h12, h22.re)
    }

    /// Largest coefficient difference; zero for identical circles.
    pub fn coefficient_distance(&self, o: &Self) -> T {
        (self.a - o.a).abs().max((self.b - o.b).norm()).max((self.d - o.d).abs())
    }
}

fn dot<T: Real>(u: &[T; 3], v: &[T; 3]) -> T {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

fn cross<T: Real>(u: &[T; 3], v: &[T; 3]) -> [T; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

fn det3<T: Real>(m: [[T; 3]; 3]) -> T {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// The unique generalized circle through three distinct points of the sphere.
pub fn circle_through<T: Real>(p1: ComplexPt<T>, p2: ComplexPt<T>, p3: ComplexPt<T>) -> Result<GeneralizedCircle<T>> {
    let pts = [p1, p2, p3];
    let sep = T::lit(1e3) * T::epsilon();
    for i in 0..3 {
        for j in i + 1..3 {
            if pts[i].chordal_distance(&pts[j]) <= sep {
                return Err(Error::DegenerateInput(format!("points {} and {} coincide", pts[i], pts[j])));
            }
        }
    }
    // rows (|x|², 2 Re(x ȳ), 2 Im(x ȳ), |y|²) for unit homogeneous (x, y)
    let rows: Vec<[T; 4]> = pts
        .iter()
        .map(|p| {
            let (x, y) = p.homogeneous();
            let n = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (x, y) = (x / n, y / n);
            let w = x * y.conj();
            let two = T::lit(2.0);
            [x.norm_sqr(), two * w.re, two * w.im, y.norm_sqr()]
        })
        .collect();
    let mut null = [T::zero(); 4];
    for (j, slot) in null.iter_mut().enumerate() {
        let mut m = [[T::zero(); 3]; 3];
        for (r, row) in rows.iter().enumerate() {
            let mut c = 0;
            for (k, &v) in row.iter().enumerate() {
                if k != j {
                    m[r][c] = v;
                    c += 1;
                }
            }
        }
        let sign = if j % 2 == 0 { T::one() } else { -T::one() };
        *slot = sign * det3(m);
    }
    let norm = null.iter().fold(T::zero(), |acc, &v| acc.max(v.abs()));
    if !(norm > sep * sep) {
        return Err(Error::DegenerateInput("points do not determine a circle".into()));
    }
    GeneralizedCircle::new(null[0], cx(null[1], null[2]), null[3])
}

/// Classifies the intersection of two generalized circles by the pencil discriminant.
pub fn classify_intersection<T: Real>(c1: &GeneralizedCircle<T>, c2: &GeneralizedCircle<T>) -> IntersectionResult<T> {
    let tol = T::algebraic_tol();
    if c1.coefficient_distance(c2) <= tol {
        return IntersectionResult::Equal;
    }
    let (n1, e1) = c1.sphere_plane();
    let (n2, e2) = c2.sphere_plane();
    // Lorentzian product of the two unit spacelike vectors; P = −2μ
    let mu = dot(&n1, &n2) - e1 * e2;
    let disc = mu * mu - T::one();
    let tangent_tol = T::lit(1e-9).max(T::epsilon().sqrt() * T::lit(4.0));
    if disc > tangent_tol {
        return IntersectionResult::Disjoint;
    }
    let u = cross(&n1, &n2);
    let uu = dot(&u, &u);
    if !(uu > T::zero()) {
        return IntersectionResult::Disjoint;
    }
    // foot point on both planes: p0 = α n1 + β n2
    let g11 = dot(&n1, &n1);
    let g12 = dot(&n1, &n2);
    let g22 = dot(&n2, &n2);
    let det = g11 * g22 - g12 * g12;
    let alpha = (-e1 * g22 + e2 * g12) / det;
    let beta = (-e2 * g11 + e1 * g12) / det;
    let p0 = [
        alpha * n1[0] + beta * n2[0],
        alpha * n1[1] + beta * n2[1],
        alpha * n1[2] + beta * n2[2],
    ];
    let bq = dot(&p0, &u);
    let cq = dot(&p0, &p0) - T::one();
    let at = |t: T| ComplexPt::from_sphere([p0[0] + t * u[0], p0[1] + t * u[1], p0[2] + t * u[2]]);
    if disc >= -tangent_tol {
        return IntersectionResult::Tangent(at(-bq / uu));
    }
    let root = (bq * bq - uu * cq).max(T::zero()).sqrt();
    let (p, q) = (at((-bq - root) / uu), at((-bq + root) / uu));
    let key = |z: &ComplexPt<T>| match z {
        ComplexPt::Finite(w) => (w.re, w.im),
        ComplexPt::Infinity => (T::infinity(), T::infinity()),
    };
    if key(&p) <= key(&q) {
        IntersectionResult::TwoPoints(p, q)
    } else {
        IntersectionResult::TwoPoints(q, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cr;

    fn pt(re: f64, im: f64) -> ComplexPt<f64> {
        ComplexPt::new(re, im)
    }

    #[test]
    fn unit_circle_from_three_points() {
        let c = circle_through(pt(1.0, 0.0), pt(0.0, 1.0), pt(-1.0, 0.0)).unwrap();
        assert!((c.a - 1.0).abs() < 1e-15 && c.b.norm() < 1e-15 && (c.d + 1.0).abs() < 1e-15);
    }

    #[test]
    fn real_axis_through_infinity() {
        let c = circle_through(pt(0.0, 0.0), pt(1.0, 0.0), ComplexPt::Infinity).unwrap();
        assert_eq!(c.a, 0.0);
        assert!((c.b - cx(0.0, 1.0)).norm() < 1e-15 && c.d.abs() < 1e-15);
    }

    #[test]
    fn coincident_points_rejected() {
        assert!(matches!(
            circle_through(pt(1.0, 0.0), pt(1.0, 0.0), pt(2.0, 0.0)),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn classification_examples() {
        let unit = GeneralizedCircle::from_center_radius(cr(0.0), 1.0).unwrap();
        let axis = GeneralizedCircle::new(0.0, cx(0.0, 1.0), 0.0).unwrap();
        match classify_intersection(&unit, &axis) {
            IntersectionResult::TwoPoints(p, q) => {
                assert!(p.chordal_distance(&pt(-1.0, 0.0)) < 1e-12);
                assert!(q.chordal_distance(&pt(1.0, 0.0)) < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        // Im z = 1  ⇔  2 Re(B̄ z) − 2 = 0 with B = i
        let top = GeneralizedCircle::new(0.0, cx(0.0, 1.0), -2.0).unwrap();
        match classify_intersection(&unit, &top) {
            IntersectionResult::Tangent(p) => assert!(p.chordal_distance(&pt(0.0, 1.0)) < 1e-8),
            other => panic!("{other:?}"),
        }
        let big = GeneralizedCircle::from_center_radius(cr(0.0), 3.0).unwrap();
        assert_eq!(classify_intersection(&unit, &big), IntersectionResult::Disjoint);
        assert_eq!(classify_intersection(&unit, &unit), IntersectionResult::Equal);
    }

    #[test]
    fn line_sampling_stays_on_line() {
        let l = GeneralizedCircle::new(0.0, cx(1.0, 2.0), 3.0).unwrap();
        for k in 1..12 {
            let p = l.point_at(k as f64 * 0.5);
            assert!(l.chordal_distance(p) < 1e-14);
        }
        assert!(l.point_at(0.0).is_infinite());
    }
}
