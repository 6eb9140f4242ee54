use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::MetricField;
use crate::error::{Error, Result};
use crate::quadrature::linear_fit;

/// Rectangular sample grid `[x0, x1] × [y0, y1]` with `nx × ny` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub nx: usize,
    pub ny: usize,
    /// Largest stencil step; shrunk to a tenth of the distance to singular points.
    pub h: f64,
    /// Residual level below which the grid is always considered fine enough.
    pub tol: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { x: [-2.0, 2.0], y: [0.1, 4.0], nx: 50, ny: 50, h: 1e-3, tol: 1e-5 }
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<Complex64> {
        let lin = |r: [f64; 2], n: usize, i: usize| {
            if n == 1 {
                0.5 * (r[0] + r[1])
            } else {
                r[0] + (r[1] - r[0]) * i as f64 / (n - 1) as f64
            }
        };
        let mut pts = Vec::with_capacity(self.nx * self.ny);
        for j in 0..self.ny {
            for i in 0..self.nx {
                pts.push(Complex64::new(lin(self.x, self.nx, i), lin(self.y, self.ny, j)));
            }
        }
        pts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiouvilleStats {
    /// Max of `|Δv + 2K e^v| / (1 + 2e^v)`.
    pub max: f64,
    pub mean: f64,
    /// Max normalized difference between the `(h, h/2)` and `(h/2, h/4)` extrapolations.
    pub disagreement: f64,
    pub points: usize,
}

fn laplacian(f: &MetricField, z: Complex64, v0: f64, h: f64) -> Result<f64> {
    let dx = Complex64::new(h, 0.0);
    let dy = Complex64::new(0.0, h);
    let s = f.v(z + dx)? + f.v(z - dx)? + f.v(z + dy)? + f.v(z - dy)? - 4.0 * v0;
    Ok(s / (h * h))
}

/// Normalized residual of `Δv + 2K e^v = 0` on a grid.
pub fn liouville_residual(field: &MetricField, grid: &GridSpec) -> Result<LiouvilleStats> {
    let kk = field.k.value::<f64>();
    let (mut max, mut sum, mut dis) = (0f64, 0f64, 0f64);
    let pts = grid.points();
    for &z in &pts {
        let d = field.singular_distance(z).min(z.im);
        if !(d > 0.0) {
            return Err(Error::MarginViolation { point: z.re, margin: d });
        }
        let h = grid.h.min(d / 10.0);
        let v0 = field.v(z)?;
        let l1 = laplacian(field, z, v0, h)?;
        let l2 = laplacian(field, z, v0, h / 2.0)?;
        let l4 = laplacian(field, z, v0, h / 4.0)?;
        let lr = (4.0 * l2 - l1) / 3.0;
        let lr_fine = (4.0 * l4 - l2) / 3.0;
        let norm = 1.0 + 2.0 * v0.exp();
        let r = (lr + 2.0 * kk * v0.exp()).abs() / norm;
        max = max.max(r);
        sum += r;
        dis = dis.max((lr - lr_fine).abs() / norm);
    }
    if dis > max.max(grid.tol) {
        return Err(Error::GridTooCoarse { disagreement: dis, residual: max });
    }
    Ok(LiouvilleStats { max, mean: sum / pts.len() as f64, disagreement: dis, points: pts.len() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeumannFit {
    pub interval: [f64; 2],
    /// Mean of `∂v/∂t · e^{−v/2}`.
    pub fitted_c: f64,
    /// Max deviation of the pointwise ratio from `fitted_c`.
    pub residual: f64,
    pub expected_c: Option<f64>,
    /// Max deviation of the pointwise ratio from `expected_c`.
    pub expected_deviation: Option<f64>,
    pub samples: usize,
}

pub const NEUMANN_SAMPLES: usize = 50;

/// `∂v/∂t` at a real point by a fourth-order one-sided stencil into the half-plane.
pub fn normal_derivative(field: &MetricField, s: f64, h: f64) -> Result<f64> {
    const W: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
    let mut acc = 0.0;
    for (j, w) in W.iter().enumerate() {
        acc += w * field.v(Complex64::new(s, j as f64 * h))?;
    }
    Ok(acc / (12.0 * h))
}

/// Fits `c` in `∂v/∂t = c e^{v/2}` on a boundary interval.
pub fn neumann_residual(field: &MetricField, interval: [f64; 2], expected_c: Option<f64>) -> Result<NeumannFit> {
    let [a, b] = interval;
    for &q in &field.singular {
        let margin = (q - a).abs().min((q - b).abs());
        if (a.min(b)..=a.max(b)).contains(&q) || margin < 1e-12 {
            return Err(Error::MarginViolation { point: q, margin });
        }
    }
    let mut ratios = Vec::with_capacity(NEUMANN_SAMPLES);
    for i in 0..NEUMANN_SAMPLES {
        let s = a + (b - a) * (i as f64 + 0.5) / NEUMANN_SAMPLES as f64;
        let d = field.singular_distance(Complex64::new(s, 0.0));
        let h = 1e-3f64.min(d / 300.0);
        let dv = normal_derivative(field, s, h)?;
        let v = field.v(Complex64::new(s, 0.0))?;
        ratios.push(dv * (-v / 2.0).exp());
    }
    let fitted_c = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let residual = ratios.iter().map(|r| (r - fitted_c).abs()).fold(0.0, f64::max);
    let expected_deviation = expected_c.map(|c| ratios.iter().map(|r| (r - c).abs()).fold(0.0, f64::max));
    Ok(NeumannFit { interval, fitted_c, residual, expected_c, expected_deviation, samples: ratios.len() })
}

/// `v_zz − v_z²/2` by central differences with one Richardson step.
pub fn schwarzian_from_density(field: &MetricField, z: Complex64, h: f64) -> Result<Complex64> {
    let derivs = |h: f64| -> Result<(f64, f64, f64, f64, f64)> {
        let e = |dx: f64, dy: f64| field.v(z + Complex64::new(dx, dy));
        let v0 = field.v(z)?;
        let (xp, xm, yp, ym) = (e(h, 0.0)?, e(-h, 0.0)?, e(0.0, h)?, e(0.0, -h)?);
        let vx = (xp - xm) / (2.0 * h);
        let vy = (yp - ym) / (2.0 * h);
        let vxx = (xp - 2.0 * v0 + xm) / (h * h);
        let vyy = (yp - 2.0 * v0 + ym) / (h * h);
        let vxy = (e(h, h)? - e(h, -h)? - e(-h, h)? + e(-h, -h)?) / (4.0 * h * h);
        Ok((vx, vy, vxx, vyy, vxy))
    };
    let a = derivs(h)?;
    let b = derivs(h / 2.0)?;
    let r = |x: f64, y: f64| (4.0 * y - x) / 3.0;
    let (vx, vy, vxx, vyy, vxy) = (r(a.0, b.0), r(a.1, b.1), r(a.2, b.2), r(a.3, b.3), r(a.4, b.4));
    let vz = Complex64::new(vx, -vy) / 2.0;
    let vzz = Complex64::new(vxx - vyy, -2.0 * vxy) / 4.0;
    Ok(vzz - vz * vz / 2.0)
}

/// `e^v` sampled along a ray from the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayProfile {
    /// Least-squares slope of `log e^v` against `log r`.
    pub slope: f64,
    /// `max/min − 1` of `r² (ln r)² e^v`.
    pub log_two_variation: f64,
    /// `max/min − 1` of `r² (ln r)⁴ e^v`.
    pub log_four_variation: f64,
}

pub fn ray_profile(field: &MetricField, angle: f64, lo: f64, hi: f64) -> Result<RayProfile> {
    let n = 41;
    let (mut xs, mut ys, mut l2, mut l4) = (vec![], vec![], vec![], vec![]);
    for i in 0..n {
        let r = lo * (hi / lo).powf(i as f64 / (n - 1) as f64);
        let v = field.v(Complex64::from_polar(r, angle))?;
        let lr = r.ln();
        xs.push(lr);
        ys.push(v);
        l2.push(2.0 * lr + 2.0 * lr.abs().ln() + v);
        l4.push(2.0 * lr + 4.0 * lr.abs().ln() + v);
    }
    let spread = |s: &[f64]| {
        let (mn, mx) = s.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        (mx - mn).exp() - 1.0
    };
    Ok(RayProfile { slope: linear_fit(&xs, &ys).0, log_two_variation: spread(&l2), log_four_variation: spread(&l4) })
}
