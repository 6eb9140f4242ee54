//! Taylor-series integration of `y'' + Q y / 2 = 0` for a pair of solutions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schwarzian::SchwarzianSpec;

/// Smallest step the integrator will take.
pub const MIN_STEP: f64 = 1e-9;
const ORDER: usize = 30;
const STEP_FRACTION: f64 = 0.3;
const LOCAL_TOL: f64 = 1e-12;

/// A pair of solutions and their derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairState {
    pub z: Complex64,
    pub y: [Complex64; 2],
    pub dy: [Complex64; 2],
}

impl PairState {
    /// `(y1, y2, y1', y2') = (1, 0, 0, 1)` at `z`.
    pub fn unit(z: Complex64) -> Self {
        let (o, n) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        PairState { z, y: [o, n], dy: [n, o] }
    }

    pub fn wronskian(&self) -> Complex64 {
        self.y[0] * self.dy[1] - self.y[1] * self.dy[0]
    }
}

/// Samples of a solution pair along a path, with the Wronskian check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ODESolutionPair {
    /// State at every vertex of the path, starting with the initial state.
    pub states: Vec<PairState>,
    pub wronskian: Complex64,
    /// `max |W − W₀| / |W₀|` over the vertices.
    pub wronskian_drift: f64,
    pub steps: usize,
}

impl ODESolutionPair {
    pub fn last(&self) -> &PairState {
        self.states.last().expect("nonempty path")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PoleTerm {
    pub q: f64,
    pub alpha: Complex64,
    pub beta: Complex64,
}

/// Local Taylor expansions of `Q` and the stepping rule.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Stepper {
    pub poles: Vec<PoleTerm>,
}

impl Stepper {
    pub fn new(spec: &SchwarzianSpec) -> Self {
        let poles = match spec {
            SchwarzianSpec::Global { global_c } => vec![PoleTerm {
                q: 0.0,
                alpha: Complex64::new(global_c[0], global_c[1]),
                beta: Complex64::new(0.0, 0.0),
            }],
            SchwarzianSpec::Poles { poles } => poles
                .iter()
                .map(|p| PoleTerm { q: p.q, alpha: p.alpha.into(), beta: p.beta.into() })
                .collect(),
        };
        Stepper { poles }
    }

    /// Distance to the nearest pole and its position.
    pub fn nearest(&self, z: Complex64) -> (f64, f64) {
        self.poles
            .iter()
            .map(|p| ((z - p.q).norm(), p.q))
            .fold((f64::INFINITY, f64::NAN), |a, b| if b.0 < a.0 { b } else { a })
    }

    pub fn q(&self, z: Complex64) -> Complex64 {
        self.poles
            .iter()
            .map(|p| {
                let inv = (z - p.q).inv();
                inv * inv * p.alpha + inv * p.beta
            })
            .sum()
    }

    pub fn q_prime(&self, z: Complex64) -> Complex64 {
        self.poles
            .iter()
            .map(|p| {
                let inv = (z - p.q).inv();
                -(inv * inv * inv * p.alpha * 2.0 + inv * inv * p.beta)
            })
            .sum()
    }

    /// Coefficients of `Q(z0 + h t)` in powers of `t`.
    fn scaled_taylor(&self, z0: Complex64, h: Complex64, n: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for p in &self.poles {
            let d = Complex64::new(p.q, 0.0) - z0;
            let r = h / d;
            let dinv = d.inv();
            // (u − d)⁻² = Σ (k+1) u^k / d^{k+2},  (u − d)⁻¹ = −Σ u^k / d^{k+1}
            let mut rk = Complex64::new(1.0, 0.0);
            for (k, slot) in out.iter_mut().enumerate() {
                *slot += rk * dinv * dinv * p.alpha * (k as f64 + 1.0) - rk * dinv * p.beta;
                rk *= r;
            }
        }
        out
    }

    /// One Taylor step of size `h`; returns the new state and an error estimate.
    fn step(&self, s: &PairState, h: Complex64) -> (PairState, f64) {
        let qh = self.scaled_taylor(s.z, h, ORDER);
        let h2 = h * h;
        let mut out = *s;
        out.z = s.z + h;
        let mut err = 0.0f64;
        for j in 0..2 {
            // d_n = c_n h^n
            let mut d = vec![Complex64::new(0.0, 0.0); ORDER + 1];
            d[0] = s.y[j];
            d[1] = s.dy[j] * h;
            for n in 0..ORDER - 1 {
                let acc: Complex64 = (0..=n).map(|k| qh[k] * d[n - k]).sum();
                d[n + 2] = -acc * h2 * 0.5 / (((n + 2) * (n + 1)) as f64);
            }
            let y: Complex64 = d.iter().rev().sum();
            let dy: Complex64 = d.iter().enumerate().skip(1).rev().map(|(n, c)| c * n as f64).sum::<Complex64>() / h;
            let scale = s.y[j].norm() + (s.dy[j] * h).norm();
            let tail = d[ORDER - 1].norm() + d[ORDER].norm();
            err = err.max(tail / scale.max(f64::MIN_POSITIVE));
            out.y[j] = y;
            out.dy[j] = dy;
        }
        (out, err)
    }

    /// Integrates along the straight segment to `b`.
    pub fn segment(&self, start: &PairState, b: Complex64, steps: &mut usize) -> Result<PairState> {
        let margin = 10.0 * MIN_STEP;
        let a = start.z;
        for p in &self.poles {
            let dist = segment_distance(a, b, Complex64::new(p.q, 0.0));
            if dist < margin {
                return Err(Error::PoleProximity { pole: p.q, distance: dist, margin });
            }
        }
        let mut s = *start;
        loop {
            let rem = b - s.z;
            let len = rem.norm();
            if len == 0.0 {
                return Ok(s);
            }
            let (rho, _) = self.nearest(s.z);
            let mut h = len.min(STEP_FRACTION * rho);
            loop {
                if h < MIN_STEP && h < len {
                    return Err(Error::StepUnderflow(format!("{}", s.z)));
                }
                let dir = rem / len;
                let (next, err) = self.step(&s, dir * h);
                if err <= LOCAL_TOL * h.max(1e-3) || h < MIN_STEP {
                    s = next;
                    if h == len {
                        s.z = b;
                    }
                    *steps += 1;
                    break;
                }
                h *= 0.5;
            }
        }
    }
}

fn segment_distance(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let d = b - a;
    let l2 = d.norm_sqr();
    if l2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a) * d.conj()).re / l2;
    let t = t.clamp(0.0, 1.0);
    (a + d * t - p).norm()
}

/// Continues a solution pair along a polyline starting at `init.z`.
pub fn integrate_pair(spec: &SchwarzianSpec, path: &[Complex64], init: PairState) -> Result<ODESolutionPair> {
    let w0 = init.wronskian();
    if !(w0.norm() > 0.0) {
        return Err(Error::DegenerateInput("initial data has zero Wronskian".into()));
    }
    let stepper = Stepper::new(spec);
    let mut states = vec![init];
    let mut steps = 0;
    let mut drift = 0.0f64;
    let mut cur = init;
    for &b in path {
        cur = stepper.segment(&cur, b, &mut steps)?;
        drift = drift.max((cur.wronskian() - w0).norm() / w0.norm());
        states.push(cur);
    }
    Ok(ODESolutionPair { states, wronskian: w0, wronskian_drift: drift, steps })
}
