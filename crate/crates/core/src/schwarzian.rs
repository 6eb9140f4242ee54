//! Schwarzian derivative, Schwarzian data with poles on the real axis, and the charts
//! used around `0` and `∞`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ChartJet, Jet3};
use crate::scalar::{Cx, Real};
use crate::validity::Validity;

/// `{g, z} = g'''/g' − (3/2)(g''/g')²`.
pub fn schwarzian<T: Real>(g: &Jet3<T>) -> Result<Cx<T>> {
    let floor = T::lit(1e-13).max(T::epsilon() * T::lit(10.0));
    if !(g.f1.norm() >= floor * g.f0.norm().max(T::one())) {
        return Err(Error::CriticalPoint(g.f1.norm().to_f64().unwrap_or(0.0)));
    }
    let r = g.f2 / g.f1;
    Ok(g.f3 / g.f1 - r * r * T::lit(1.5))
}

/// Schwarzian of a sphere-valued jet; either chart gives the same value.
pub fn schwarzian_chart<T: Real>(g: &ChartJet<T>) -> Result<Cx<T>> {
    schwarzian(&g.jet)
}

/// One double pole `α/(z − q)² + β/(z − q)` on the real axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Schwarzian data `Q`: a finite sum of real double poles, or `c/z²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SchwarzianSpec {
    Poles { poles: Vec<Pole> },
    Global { global_c: [f64; 2] },
}

const POLE_GUARD: f64 = 1e-12;

/// Validation verdict together with the residue datum at infinity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecReport {
    pub validity: Validity,
    pub alpha_infinity: f64,
    pub beta_sum: f64,
}

impl SchwarzianSpec {
    pub fn poles(poles: Vec<Pole>) -> Self {
        SchwarzianSpec::Poles { poles }
    }

    pub fn global(c: Complex64) -> Self {
        SchwarzianSpec::Global { global_c: [c.re, c.im] }
    }

    /// The pole list, treating `c/z²` as a single pole at the origin when `c` is real.
    pub fn pole_list(&self) -> Vec<Pole> {
        match self {
            SchwarzianSpec::Poles { poles } => poles.clone(),
            SchwarzianSpec::Global { global_c } => vec![Pole { q: 0.0, alpha: global_c[0], beta: 0.0 }],
        }
    }

    pub fn global_c(&self) -> Option<Complex64> {
        match self {
            SchwarzianSpec::Global { global_c } => Some(Complex64::new(global_c[0], global_c[1])),
            SchwarzianSpec::Poles { .. } => None,
        }
    }

    /// `Σ (α_i + q_i β_i)`, the coefficient of the double pole at infinity.
    pub fn alpha_infinity(&self) -> f64 {
        match self {
            SchwarzianSpec::Global { global_c } => global_c[0],
            SchwarzianSpec::Poles { poles } => poles.iter().map(|p| p.alpha + p.q * p.beta).sum(),
        }
    }

    pub fn beta_sum(&self) -> f64 {
        match self {
            SchwarzianSpec::Global { .. } => 0.0,
            SchwarzianSpec::Poles { poles } => poles.iter().map(|p| p.beta).sum(),
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        eval_q(self, z)
    }
}

/// Evaluates `Q(z)`; refuses points within `1e−12` of a pole.
pub fn eval_q(spec: &SchwarzianSpec, z: Complex64) -> Result<Complex64> {
    match spec {
        SchwarzianSpec::Global { global_c } => {
            if z.norm() <= POLE_GUARD {
                return Err(Error::PoleEvaluation(0.0));
            }
            Ok(Complex64::new(global_c[0], global_c[1]) / (z * z))
        }
        SchwarzianSpec::Poles { poles } => {
            let mut acc = Complex64::new(0.0, 0.0);
            for p in poles {
                let u = z - p.q;
                if u.norm() <= POLE_GUARD {
                    return Err(Error::PoleEvaluation(p.q));
                }
                let inv = u.inv();
                acc += inv * inv * p.alpha + inv * p.beta;
            }
            Ok(acc)
        }
    }
}

/// Checks `α_i ≤ 1/2`, `Σβ_i = 0` and `Σ(α_i + q_i β_i) ≤ 1/2`, and orders the poles.
pub fn validate_spec(spec: &SchwarzianSpec) -> SpecReport {
    let alpha_infinity = spec.alpha_infinity();
    let beta_sum = spec.beta_sum();
    let validity = match spec {
        SchwarzianSpec::Global { global_c } => {
            if global_c[1] != 0.0 {
                Validity::Invalid(format!("c = {}{:+}i is not real", global_c[0], global_c[1]))
            } else {
                Validity::Valid
            }
        }
        SchwarzianSpec::Poles { poles } => check_poles(poles, alpha_infinity, beta_sum),
    };
    SpecReport { validity, alpha_infinity, beta_sum }
}

fn check_poles(poles: &[Pole], alpha_infinity: f64, beta_sum: f64) -> Validity {
    for p in poles {
        if !(p.q.is_finite() && p.alpha.is_finite() && p.beta.is_finite()) {
            return Validity::Invalid("pole data must be finite".into());
        }
    }
    for w in poles.windows(2) {
        if !(w[0].q < w[1].q) {
            return Validity::Invalid(format!("pole positions must be strictly increasing ({} then {})", w[0].q, w[1].q));
        }
    }
    if let Some(p) = poles.iter().find(|p| p.alpha > 0.5) {
        return Validity::Invalid(format!("alpha = {} at q = {} exceeds 1/2", p.alpha, p.q));
    }
    let scale = poles.iter().fold(1.0f64, |m, p| m.max(p.beta.abs()));
    if beta_sum.abs() > 1e-14 * scale {
        return Validity::Invalid(format!("sum of residues beta is {beta_sum:e}, must vanish"));
    }
    if alpha_infinity > 0.5 + 1e-14 {
        return Validity::Invalid(format!("sum of alpha_i + q_i beta_i is {alpha_infinity}, exceeds 1/2"));
    }
    Validity::Valid
}

/// `Q̃(w) = w⁻⁴ Q(−1/w)`, the Schwarzian data in the chart at infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct InvertedSpec {
    pub source: SchwarzianSpec,
    /// `lim_{w→0} w² Q̃(w)` when it exists.
    pub alpha_infinity: f64,
    /// Coefficient of the `1/w` term of `w² Q̃(w)`; nonzero means the limit diverges.
    pub divergent_residue: f64,
}

impl InvertedSpec {
    pub fn eval(&self, w: Complex64) -> Result<Complex64> {
        if w.norm() <= POLE_GUARD {
            return Err(Error::PoleEvaluation(f64::INFINITY));
        }
        let z = -w.inv();
        let w2 = w * w;
        Ok(eval_q(&self.source, z)? / (w2 * w2))
    }

    pub fn is_divergent(&self) -> bool {
        self.divergent_residue.abs() > 1e-14
    }

    /// Taylor coefficients `p_0, …, p_{n−1}` of `w² Q̃(w)` at `w = 0`, without the `1/w` term.
    pub fn taylor(&self, n: usize) -> Vec<f64> {
        let poles = self.source.pole_list();
        (0..n)
            .map(|k| {
                poles
                    .iter()
                    .map(|p| {
                        let m = (-p.q).powi(k as i32);
                        p.alpha * (k as f64 + 1.0) * m - p.beta * m * (-p.q)
                    })
                    .sum()
            })
            .collect()
    }
}

/// Moves the Schwarzian data to the chart `w = −1/z` around infinity.
pub fn inversion_transform(spec: &SchwarzianSpec) -> InvertedSpec {
    InvertedSpec {
        source: spec.clone(),
        alpha_infinity: spec.alpha_infinity(),
        divergent_residue: -spec.beta_sum(),
    }
}

/// `e^{2w} Q(e^w) − 1/2`, the Schwarzian of `w ↦ g(e^w)` when `{g, z} = Q`.
pub fn log_chart_transform<Q>(q: Q, w: Complex64) -> Result<Complex64>
where
    Q: Fn(Complex64) -> Result<Complex64>,
{
    let z = w.exp();
    Ok(z * z * q(z)? - 0.5)
}

/// Roots `λ₁ ≤ λ₂` of `λ² − λ + α/2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndicialRoots {
    pub lambda1: f64,
    pub lambda2: f64,
    /// The root difference is a nonnegative integer, so a logarithmic term may appear.
    pub logarithmic: bool,
}

impl IndicialRoots {
    pub fn difference(&self) -> f64 {
        self.lambda2 - self.lambda1
    }

    /// The integer root difference in the logarithmic case.
    pub fn resonance(&self) -> Option<usize> {
        self.logarithmic.then(|| self.difference().round() as usize)
    }
}

pub fn indicial_roots(alpha: f64) -> Result<IndicialRoots> {
    if !(alpha <= 0.5) {
        return Err(Error::DomainError(format!("alpha = {alpha} > 1/2 gives complex indicial roots")));
    }
    let s = (1.0 - 2.0 * alpha).sqrt();
    let n = s.round();
    let logarithmic = (s - n).abs() <= 1e-12 * s.max(1.0);
    let s = if logarithmic { n } else { s };
    Ok(IndicialRoots { lambda1: 0.5 * (1.0 - s), lambda2: 0.5 * (1.0 + s), logarithmic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Mobius;
    use crate::scalar::{cr, cx};

    #[test]
    fn mobius_has_zero_schwarzian() {
        let m = Mobius::new(cx(1.0, 0.3), cx(-2.0, 1.0), cx(0.5, 0.5), cx(1.0, -1.0)).unwrap();
        let s = schwarzian_chart(&m.chart_jet(cx(0.7, 0.4))).unwrap();
        assert!(s.norm() < 1e-13);
    }

    #[test]
    fn power_and_log() {
        let z = Jet3::variable(cr(1.0f64));
        let s = schwarzian(&z.powc_upper(cr(0.5))).unwrap();
        assert!((s - cr(0.375)).norm() < 1e-14);
        let s = schwarzian(&Jet3::variable(cr(2.0f64)).ln()).unwrap();
        assert!((s - cr(0.125)).norm() < 1e-14);
    }

    #[test]
    fn critical_point_detected() {
        let z = Jet3::variable(cr(0.0f64));
        assert!(matches!(schwarzian(&(z * z)), Err(Error::CriticalPoint(_))));
    }

    #[test]
    fn spec_examples() {
        let sym = |b: f64| {
            SchwarzianSpec::poles(vec![
                Pole { q: -1.0, alpha: 0.25, beta: b },
                Pole { q: 1.0, alpha: 0.25, beta: -b },
            ])
        };
        assert!((eval_q(&sym(0.0), cr(0.0)).unwrap() - cr(0.5)).norm() < 1e-15);
        let r = validate_spec(&sym(0.1));
        assert!(r.validity.is_valid());
        assert!((r.alpha_infinity - 0.3).abs() < 1e-15);
        let bad = validate_spec(&SchwarzianSpec::poles(vec![Pole { q: 0.0, alpha: 1.0, beta: 0.0 }]));
        assert!(bad.validity.reason().unwrap().contains("alpha"));
        let bad = validate_spec(&SchwarzianSpec::poles(vec![Pole { q: 0.0, alpha: 0.0, beta: 1.0 }]));
        assert!(bad.validity.reason().unwrap().contains("beta"));
        assert!(matches!(eval_q(&sym(0.1), cr(1.0)), Err(Error::PoleEvaluation(_))));
    }

    #[test]
    fn indicial_examples() {
        let r = indicial_roots(0.5).unwrap();
        assert_eq!((r.lambda1, r.lambda2, r.logarithmic), (0.5, 0.5, true));
        let r = indicial_roots(0.0).unwrap();
        assert_eq!((r.lambda1, r.lambda2, r.logarithmic), (0.0, 1.0, true));
        let r = indicial_roots(0.375).unwrap();
        assert_eq!((r.lambda1, r.lambda2, r.logarithmic), (0.25, 0.75, false));
        assert!(indicial_roots(0.6).is_err());
    }

    #[test]
    fn inverted_taylor_matches_direct_evaluation() {
        let spec = SchwarzianSpec::poles(vec![
            Pole { q: -1.0, alpha: 0.25, beta: 0.1 },
            Pole { q: 1.0, alpha: 0.25, beta: -0.1 },
        ]);
        let inv = inversion_transform(&spec);
        let p = inv.taylor(40);
        let w = cx(0.05, 0.02);
        let series: Complex64 = p.iter().enumerate().map(|(k, c)| w.powi(k as i32) * *c).sum();
        let direct = inv.eval(w).unwrap() * w * w;
        assert!((series - direct).norm() < 1e-13);
        assert!(!inv.is_divergent());
    }

    #[test]
    fn spec_json_shapes() {
        let s: SchwarzianSpec = serde_json::from_str(r#"{"poles":[{"q":0.0,"alpha":0.375,"beta":0.0}]}"#).unwrap();
        assert_eq!(s.pole_list().len(), 1);
        let g: SchwarzianSpec = serde_json::from_str(r#"{"global_c":[0.375,0.0]}"#).unwrap();
        assert_eq!(g.global_c(), Some(Complex64::new(0.375, 0.0)));
    }
}
