//! The explicit power-type and log-type solutions, their boundary constants, existence
//! and synthesis from boundary data, and their behavior at the origin.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::developing::{gamma_reduction, DevelopingMap, SymmetricFactor, Variant};
use crate::error::{Error, Result};
use crate::geometry::{Curvature, Mobius};
use crate::scalar::log_upper;
use crate::validity::Validity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    #[serde(alias = "Power")]
    Power,
    #[serde(alias = "Log")]
    Log,
}

/// `(family, K, γ, λ, z0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "ParamsJson", into = "ParamsJson")]
pub struct CanonicalParams {
    pub family: Family,
    pub k: Curvature,
    /// Exponent of the power family; unused for the log family.
    pub gamma: f64,
    pub lambda: f64,
    pub z0: Complex64,
}

#[derive(Serialize, Deserialize)]
struct ParamsJson {
    family: Family,
    #[serde(rename = "K")]
    k: Curvature,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    lambda: f64,
    z0: [f64; 2],
}

impl From<ParamsJson> for CanonicalParams {
    fn from(j: ParamsJson) -> Self {
        CanonicalParams {
            family: j.family,
            k: j.k,
            gamma: j.gamma.unwrap_or(f64::NAN),
            lambda: j.lambda,
            z0: Complex64::new(j.z0[0], j.z0[1]),
        }
    }
}

impl From<CanonicalParams> for ParamsJson {
    fn from(p: CanonicalParams) -> Self {
        ParamsJson {
            family: p.family,
            k: p.k,
            gamma: (p.family == Family::Power).then_some(p.gamma),
            lambda: p.lambda,
            z0: [p.z0.re, p.z0.im],
        }
    }
}

impl CanonicalParams {
    pub fn power(k: Curvature, gamma: f64, lambda: f64, z0: Complex64) -> Self {
        CanonicalParams { family: Family::Power, k, gamma, lambda, z0 }
    }

    pub fn log(k: Curvature, lambda: f64, z0: Complex64) -> Self {
        CanonicalParams { family: Family::Log, k, gamma: f64::NAN, lambda, z0 }
    }

    pub fn r0(&self) -> f64 {
        self.z0.norm()
    }

    /// `arg z0 ∈ [0, 2π)`, with `θ0 = 0` at `z0 = 0`.
    pub fn theta0(&self) -> f64 {
        if self.z0.norm() == 0.0 {
            return 0.0;
        }
        let t = self.z0.im.atan2(self.z0.re);
        if t < 0.0 {
            t + TAU
        } else {
            t
        }
    }

    /// `Kλ² + |ζ − z0|²` at the image `ζ` of a point.
    fn denominator_at(&self, zeta: Complex64) -> f64 {
        self.k.value::<f64>() * self.lambda * self.lambda + (zeta - self.z0).norm_sqr()
    }
}

/// Neumann constants on the positive (`c1`) and negative (`c2`) half-axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryConstants {
    pub c1: f64,
    pub c2: f64,
}

/// Behavior of `e^v` at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum AsymptoticClass {
    /// `|z|^{−2α} e^v` has a nonzero limit, `α > −1`.
    Conical { alpha: f64 },
    /// `|z|² (ln|z|)⁴ e^v` has a nonzero limit.
    LogFour,
    /// `|z|² (ln|z|)² e^v` has a nonzero limit.
    LogTwo,
}

/// Outcome of the denominator scan over the closed half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DenominatorScan {
    /// Smallest value of the denominator found, relative to `λ² + r0²`.
    pub relative_min: f64,
    /// Where the minimum was found, in the image coordinate `z^γ` or `log z`.
    pub argmin: [f64; 2],
    pub vanishes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Final verdict; the scan decides when the two checks disagree.
    pub validity: Validity,
    pub analytic: Validity,
    pub scan: DenominatorScan,
    pub agree: bool,
}

const SCAN_FLOOR: f64 = 1e-9;

fn analytic_validity(p: &CanonicalParams) -> Validity {
    if !(p.lambda > 0.0 && p.lambda.is_finite()) {
        return Validity::Invalid(format!("lambda = {} must be positive", p.lambda));
    }
    if !(p.z0.re.is_finite() && p.z0.im.is_finite()) {
        return Validity::Invalid("z0 must be finite".into());
    }
    match (p.family, p.k) {
        (Family::Power, _) if !(p.gamma > 0.0 && p.gamma.is_finite()) => {
            Validity::Invalid(format!("gamma = {} must be positive", p.gamma))
        }
        (_, Curvature::Spherical) => Validity::Valid,
        (Family::Power, Curvature::Flat) => {
            let t0 = p.theta0();
            if p.r0() == 0.0 {
                Validity::Invalid("z0 = 0 gives infinite area at the origin".into())
            } else if !(PI * p.gamma < t0) {
                Validity::Invalid(format!("pi*gamma = {} is not below theta0 = {t0}", PI * p.gamma))
            } else {
                Validity::Valid
            }
        }
        (Family::Power, Curvature::Hyperbolic) => {
            let (r0, t0) = (p.r0(), p.theta0());
            if !(p.lambda < r0) {
                return Validity::Invalid(format!("lambda = {} is not below |z0| = {r0}", p.lambda));
            }
            let a0 = (p.lambda / r0).asin();
            if !(PI * p.gamma < t0 - a0) {
                Validity::Invalid(format!("pi*gamma = {} is not below theta0 - alpha0 = {}", PI * p.gamma, t0 - a0))
            } else if !(t0 + a0 < TAU) {
                Validity::Invalid(format!(
                    "theta0 + alpha0 = {} reaches 2*pi: the disk about z0 meets the positive axis",
                    t0 + a0
                ))
            } else {
                Validity::Valid
            }
        }
        (Family::Log, Curvature::Flat) => {
            if p.z0.im < 0.0 || p.z0.im > PI {
                Validity::Valid
            } else {
                Validity::Invalid(format!("Im z0 = {} lies in [0, pi]", p.z0.im))
            }
        }
        (Family::Log, Curvature::Hyperbolic) => {
            if p.z0.im < -p.lambda || p.z0.im > PI + p.lambda {
                Validity::Valid
            } else {
                Validity::Invalid(format!("Im z0 = {} lies in [-lambda, pi + lambda]", p.z0.im))
            }
        }
    }
}

/// Minimizes the denominator over the image of the closed half-plane: the sector
/// `{ρ e^{iφ}: 0 ≤ φ ≤ πγ}` for the power family, the strip `0 ≤ Im ζ ≤ π` for the log family.
pub fn denominator_scan(p: &CanonicalParams) -> DenominatorScan {
    let scale = p.lambda * p.lambda + p.z0.norm_sqr();
    let s = p.r0().max(p.lambda).max(1.0);
    // coordinates (a, b): power (log ρ, φ) plus the vertex ρ = 0, log (x, y)
    let (a_lo, a_hi, b_hi) = match p.family {
        Family::Power => ((1e-8 * s).ln(), (1e8 * s).ln(), (PI * p.gamma).min(TAU)),
        Family::Log => (p.z0.re - 50.0 * s, p.z0.re + 50.0 * s, PI),
    };
    let map = |a: f64, b: f64| match p.family {
        Family::Power => Complex64::from_polar(a.exp(), b),
        Family::Log => Complex64::new(a, b),
    };
    let f = |a: f64, b: f64| p.denominator_at(map(a, b));
    let (na, nb) = (400, 200);
    let mut cands: Vec<(f64, f64, f64)> = Vec::with_capacity(na * (nb + 1));
    for i in 0..=na {
        let a = a_lo + (a_hi - a_lo) * i as f64 / na as f64;
        for j in 0..=nb {
            let b = b_hi * j as f64 / nb as f64;
            cands.push((f(a, b), a, b));
        }
    }
    cands.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut best = (f64::INFINITY, 0.0, 0.0);
    let (da0, db0) = ((a_hi - a_lo) / na as f64, b_hi / nb as f64);
    for &(v0, a0, b0) in cands.iter().take(8) {
        let (mut v, mut a, mut b) = (v0, a0, b0);
        let (mut da, mut db) = (da0, db0.max(1e-12));
        while da > 1e-14 * (1.0 + a.abs()) || db > 1e-14 {
            let mut moved = false;
            for (ta, tb) in [(a + da, b), (a - da, b), (a, b + db), (a, b - db)] {
                let ta = ta.clamp(a_lo, a_hi);
                let tb = tb.clamp(0.0, b_hi);
                let tv = f(ta, tb);
                if tv < v {
                    (v, a, b) = (tv, ta, tb);
                    moved = true;
                }
            }
            if !moved {
                da *= 0.5;
                db *= 0.5;
            }
        }
        if v < best.0 {
            best = (v, a, b);
        }
    }
    let mut argmin = map(best.1, best.2);
    if p.family == Family::Power {
        let v0 = p.denominator_at(Complex64::new(0.0, 0.0));
        if v0 <= best.0 {
            best.0 = v0;
            argmin = Complex64::new(0.0, 0.0);
        }
    }
    let relative_min = best.0 / scale;
    DenominatorScan { relative_min, argmin: [argmin.re, argmin.im], vanishes: relative_min < SCAN_FLOOR }
}

/// Decides whether the parameters define a finite-area canonical solution.
pub fn validate_params(p: &CanonicalParams) -> ValidationReport {
    let analytic = analytic_validity(p);
    let basic = !(p.lambda > 0.0) || (p.family == Family::Power && !(p.gamma > 0.0)) || !p.z0.norm().is_finite();
    if basic {
        let scan = DenominatorScan { relative_min: f64::NAN, argmin: [f64::NAN; 2], vanishes: true };
        return ValidationReport { validity: analytic.clone(), analytic, scan, agree: true };
    }
    let scan = denominator_scan(p);
    let scan_valid = !scan.vanishes;
    let agree = scan_valid == analytic.is_valid();
    let validity = if agree {
        analytic.clone()
    } else if scan_valid {
        Validity::Valid
    } else {
        Validity::Invalid(format!(
            "denominator vanishes near {}{:+}i (relative minimum {:e})",
            scan.argmin[0], scan.argmin[1], scan.relative_min
        ))
    };
    ValidationReport { validity, analytic, scan, agree }
}

/// `v(z)` of the canonical solution, evaluated in log-space.
pub fn evaluate_density(p: &CanonicalParams, z: Complex64) -> Result<f64> {
    if z.im < 0.0 {
        return Err(Error::DomainError(format!("{z} lies below the real axis")));
    }
    if z.norm() == 0.0 {
        return Err(Error::DomainError("the origin is singular".into()));
    }
    let lz = log_upper(z);
    let two = 2.0;
    let (num, zeta) = match p.family {
        Family::Power => (
            4f64.ln() + two * p.lambda.ln() + two * p.gamma.ln() + two * (p.gamma - 1.0) * lz.re,
            (lz * p.gamma).exp(),
        ),
        Family::Log => (4f64.ln() + two * p.lambda.ln() - two * lz.re, lz),
    };
    let den = p.denominator_at(zeta);
    if !(den > 0.0) {
        return Err(Error::DomainError(format!("denominator {den} is not positive at {z}")));
    }
    Ok(num - two * den.ln())
}

pub fn boundary_constants(p: &CanonicalParams) -> BoundaryConstants {
    match p.family {
        Family::Power => {
            let (r, t) = (p.r0() / p.lambda, p.theta0());
            BoundaryConstants { c1: 2.0 * r * t.sin(), c2: -2.0 * r * (t - PI * p.gamma).sin() }
        }
        Family::Log => BoundaryConstants {
            c1: 2.0 / p.lambda * p.z0.im,
            c2: 2.0 / p.lambda * (PI - p.z0.im),
        },
    }
}

/// Whether boundary constants `(c1, c2)` admit a finite-area solution.
pub fn existence(k: Curvature, c1: f64, c2: f64) -> bool {
    match k {
        Curvature::Spherical => true,
        Curvature::Flat => c1.min(c2) < 0.0,
        Curvature::Hyperbolic => c1 < -2.0 || c2 < -2.0 || c1 + c2 < 0.0,
    }
}

/// Reason attached to [`Error::NoSolution`].
pub const NO_SOLUTION_REASON: &str = "no finite-area solution exists for these constants";

fn angle_candidates(s: f64) -> [f64; 2] {
    let a = s.asin();
    [a.rem_euclid(TAU), (PI - a).rem_euclid(TAU)]
}

fn synthesize_power(k: Curvature, c1: f64, c2: f64) -> Option<CanonicalParams> {
    if k == Curvature::Spherical && c1 == 0.0 && c2 == 0.0 {
        return Some(CanonicalParams::power(k, 1.0, 1.0, Complex64::new(0.0, 0.0)));
    }
    let r0_big = 2.0 * 2f64.max(c1.abs()).max(c2.abs()) + 1.0;
    let alpha0 = (2.0 / r0_big).asin();
    let xs = angle_candidates(c1 / r0_big);
    let ys = angle_candidates(-c2 / r0_big);
    let mut best: Option<(f64, f64, f64)> = None;
    for &x in &xs {
        for &y0 in &ys {
            let ys_shifted: &[f64] = if k == Curvature::Spherical { &[y0, y0 - TAU] } else { &[y0] };
            for &y in ys_shifted {
                let margin = match k {
                    Curvature::Spherical => x - y,
                    Curvature::Flat => y.min(x - y).min(TAU - x),
                    Curvature::Hyperbolic => (y - alpha0).min(x - y).min(TAU - alpha0 - x),
                };
                if margin > 0.0 && best.is_none_or(|b| margin > b.0) {
                    best = Some((margin, x, y));
                }
            }
        }
    }
    let (_, x, y) = best?;
    let p = CanonicalParams::power(k, (x - y) / PI, 1.0, Complex64::from_polar(r0_big / 2.0, x));
    Some(p)
}

fn synthesize_log(k: Curvature, c1: f64, c2: f64) -> Option<CanonicalParams> {
    let sum = c1 + c2;
    if !(sum > 0.0) {
        return None;
    }
    let lambda = TAU / sum;
    Some(CanonicalParams::log(k, lambda, Complex64::new(0.0, lambda * c1 / 2.0)))
}

fn round_trips(p: &CanonicalParams, c1: f64, c2: f64) -> bool {
    let b = boundary_constants(p);
    let tol = 1e-9 * (1.0 + c1.abs().max(c2.abs()));
    (b.c1 - c1).abs() <= tol && (b.c2 - c2).abs() <= tol
}

/// Builds canonical parameters with the prescribed boundary constants: the power family
/// first, the log family when the power construction has no admissible angles.
pub fn synthesize(k: Curvature, c1: f64, c2: f64) -> Result<CanonicalParams> {
    if !(c1.is_finite() && c2.is_finite()) {
        return Err(Error::DomainError("boundary constants must be finite".into()));
    }
    for cand in [synthesize_power(k, c1, c2), synthesize_log(k, c1, c2)].into_iter().flatten() {
        if round_trips(&cand, c1, c2) && validate_params(&cand).validity.is_valid() {
            return Ok(cand);
        }
    }
    Err(Error::NoSolution(NO_SOLUTION_REASON.into()))
}

pub fn classify_asymptotics(p: &CanonicalParams) -> AsymptoticClass {
    match p.family {
        Family::Power => AsymptoticClass::Conical { alpha: p.gamma - 1.0 },
        Family::Log => AsymptoticClass::LogFour,
    }
}

/// Regression of `e^v` along the ray `arg z = π/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticFit {
    pub class: AsymptoticClass,
    /// Least-squares slope of `log e^v` against `log r`.
    pub slope: f64,
    /// `max/min − 1` of `r² (ln r)⁴ e^v` over the sampled radii.
    pub log_four_variation: f64,
    pub consistent: bool,
}

/// [`asymptotic_fit_on`] over `[1e-8, 1e-3]` for conical and `[1e-8, 1e-4]` for log behavior.
pub fn asymptotic_fit(p: &CanonicalParams) -> Result<AsymptoticFit> {
    match classify_asymptotics(p) {
        AsymptoticClass::Conical { .. } => asymptotic_fit_on(p, 1e-8, 1e-3),
        _ => asymptotic_fit_on(p, 1e-8, 1e-4),
    }
}

/// Fit over radii `[lo, hi]`; the density is evaluated in log-space, so radii far below
/// the floating-point range of `e^v` are allowed.
pub fn asymptotic_fit_on(p: &CanonicalParams, lo: f64, hi: f64) -> Result<AsymptoticFit> {
    let class = classify_asymptotics(p);
    let n = 41;
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    let mut l4 = Vec::with_capacity(n);
    for i in 0..n {
        let r = lo * (hi / lo).powf(i as f64 / (n - 1) as f64);
        let v = evaluate_density(p, Complex64::from_polar(r, PI / 4.0))?;
        xs.push(r.ln());
        ys.push(v);
        l4.push(2.0 * r.ln() + 4.0 * r.ln().abs().ln() + v);
    }
    let slope = crate::quadrature::linear_fit(&xs, &ys).0;
    let (mn, mx) = l4.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let log_four_variation = (mx - mn).exp() - 1.0;
    let consistent = match class {
        AsymptoticClass::Conical { alpha } => (slope - 2.0 * alpha).abs() <= 0.01,
        AsymptoticClass::LogFour => log_four_variation <= 0.05,
        AsymptoticClass::LogTwo => false,
    };
    Ok(AsymptoticFit { class, slope, log_four_variation, consistent })
}

/// `ψ` with `K|A|² + |C|² = 1/λ` and `−(KĀB + C̄D)/(K|A|² + |C|²) = z0`.
fn normalizing_mobius(p: &CanonicalParams) -> Result<Mobius<f64>> {
    let s = p.lambda.sqrt();
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match p.k {
        Curvature::Spherical => Mobius::new(c(1.0 / s, 0.0), -p.z0 / s, c(0.0, 0.0), c(s, 0.0)),
        _ => Mobius::new(c(0.0, 0.0), c(0.0, -s), c(0.0, -1.0 / s), c(0.0, 1.0) * p.z0 / s),
    }
}

/// Recovers `(λ, z0)` from Möbius coefficients; `None` when `K|A|² + |C|² = 0`.
pub fn lambda_z0_from_mobius(m: &Mobius<f64>, k: Curvature) -> Option<(f64, Complex64)> {
    let kk = k.value::<f64>();
    let den = kk * m.a.norm_sqr() + m.c.norm_sqr();
    if den.abs() <= 1e-14 {
        return None;
    }
    Some((1.0 / den.abs(), -(m.a.conj() * m.b * kk + m.c.conj() * m.d) / den))
}

/// `ψ(z^γ)` or `ψ(log z)` whose pullback density is the canonical solution.
pub fn closed_form_developing_map(p: &CanonicalParams) -> Result<DevelopingMap> {
    let psi = normalizing_mobius(p)?;
    let (lambda, z0) = lambda_z0_from_mobius(&psi, p.k)
        .ok_or_else(|| Error::NormalizationFailure("K|A|^2 + |C|^2 vanishes".into()))?;
    let scale = 1.0 + p.z0.norm();
    if (lambda - p.lambda).abs() > 1e-10 * p.lambda || (z0 - p.z0).norm() > 1e-10 * scale {
        return Err(Error::NormalizationFailure(format!(
            "coefficients give lambda = {lambda}, z0 = {z0}; expected {}, {}",
            p.lambda, p.z0
        )));
    }
    let variant = match p.family {
        Family::Power => {
            let (gamma, n) = gamma_reduction(p.gamma);
            Variant::PowerForm { gamma, f: SymmetricFactor::monomial(n), psi }
        }
        Family::Log => Variant::LogForm { f: SymmetricFactor::zero(), psi },
    };
    Ok(DevelopingMap { variant, k: p.k, domain_radius: None })
}

/// Draws valid parameters of the given family and curvature, away from the boundary of
/// the admissible region.
pub fn sample_valid_params<R: Rng + ?Sized>(k: Curvature, family: Family, rng: &mut R) -> CanonicalParams {
    let lambda = rng.gen_range(0.5..2.0);
    match family {
        Family::Power => match k {
            Curvature::Spherical => {
                let z0 = Complex64::from_polar(rng.gen_range(0.0..2.0), rng.gen_range(0.0..TAU));
                CanonicalParams::power(k, rng.gen_range(0.2..3.0), lambda, z0)
            }
            Curvature::Flat => {
                let gamma = rng.gen_range(0.1..1.9);
                let t0 = rng.gen_range(PI * gamma + 0.1..TAU - 0.05);
                CanonicalParams::power(k, gamma, lambda, Complex64::from_polar(rng.gen_range(0.3..3.0), t0))
            }
            Curvature::Hyperbolic => {
                let r0 = lambda * rng.gen_range(1.2..4.0);
                let a0 = (lambda / r0).asin();
                let gamma = rng.gen_range(0.1..(TAU - 2.0 * a0 - 0.2) / PI);
                let t0 = rng.gen_range(a0 + PI * gamma + 0.05..TAU - a0 - 0.05);
                CanonicalParams::power(k, gamma, lambda, Complex64::from_polar(r0, t0))
            }
        },
        Family::Log => {
            let shift = match k {
                Curvature::Spherical => rng.gen_range(-2.0..PI + 2.0),
                Curvature::Flat | Curvature::Hyperbolic => {
                    let m = if k == Curvature::Hyperbolic { lambda } else { 0.0 };
                    let d = rng.gen_range(0.1..2.0) + m;
                    if rng.gen_bool(0.5) {
                        -d
                    } else {
                        PI + d
                    }
                }
            };
            CanonicalParams::log(k, lambda, Complex64::new(rng.gen_range(-2.0..2.0), shift))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Curvature::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn validation_examples() {
        assert!(validate_params(&CanonicalParams::power(Spherical, 1.0, 1.0, c(0.0, 0.0))).validity.is_valid());
        let p = CanonicalParams::power(Flat, 0.5, 1.0, Complex64::from_polar(1.0, 0.75 * PI));
        let r = validate_params(&p);
        assert!(r.validity.is_valid() && r.agree);
        let p = CanonicalParams::power(Hyperbolic, 1.0, 1.0, c(0.0, 2.0));
        let r = validate_params(&p);
        assert!(!r.validity.is_valid() && r.agree && r.scan.vanishes);
        let p = CanonicalParams::power(Flat, 0.5, 1.0, c(0.0, 0.0));
        assert!(!validate_params(&p).validity.is_valid());
    }

    #[test]
    fn positive_axis_clause() {
        // disk about z0 meets the positive real axis although πγ < θ0 − α0
        let p = CanonicalParams::power(Hyperbolic, 0.2, 1.0, Complex64::from_polar(2.0, TAU - 0.3));
        let r = validate_params(&p);
        assert!(!r.analytic.is_valid() && r.agree);
    }

    #[test]
    fn density_examples() {
        let p = CanonicalParams::power(Spherical, 1.0, 1.0, c(0.0, 0.0));
        assert!(evaluate_density(&p, c(0.0, 1.0)).unwrap().abs() < 1e-15);
        let p = CanonicalParams::power(Spherical, 2.0, 1.0, c(0.0, 0.0));
        assert!((evaluate_density(&p, c(0.0, 1.0)).unwrap() - 4f64.ln()).abs() < 1e-14);
        let p = CanonicalParams::log(Spherical, 1.0, c(0.0, 0.0));
        assert!((evaluate_density(&p, c(1f64.exp(), 0.0)).unwrap() + 2.0).abs() < 1e-14);
        assert!(evaluate_density(&p, c(1.0, -0.1)).is_err());
    }

    #[test]
    fn constants_examples() {
        let b = boundary_constants(&CanonicalParams::power(Spherical, 1.0, 1.0, c(0.0, 1.0)));
        assert!((b.c1 - 2.0).abs() < 1e-15 && (b.c2 - 2.0).abs() < 1e-15);
        let b = boundary_constants(&CanonicalParams::log(Spherical, 2.0, c(0.0, PI / 2.0)));
        assert!((b.c1 - PI / 2.0).abs() < 1e-15 && (b.c2 - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn synthesis_examples() {
        let p = synthesize(Flat, -1.0, 0.5).unwrap();
        assert!(round_trips(&p, -1.0, 0.5));
        let p = synthesize(Spherical, 0.0, 0.0).unwrap();
        assert_eq!((p.gamma, p.lambda, p.z0), (1.0, 1.0, c(0.0, 0.0)));
        assert!(matches!(synthesize(Hyperbolic, 1.0, 1.0), Err(Error::NoSolution(_))));
        assert!(existence(Spherical, 100.0, 100.0));
        assert!(!existence(Flat, 1.0, 1.0));
        assert!(existence(Hyperbolic, 1.0, -2.5));
    }

    #[test]
    fn landa_round_trip() {
        let p = CanonicalParams::power(Spherical, 1.0, 1.0, c(0.0, 1.0));
        let dm = closed_form_developing_map(&p).unwrap();
        let (l, z0) = lambda_z0_from_mobius(&dm.psi().unwrap(), Spherical).unwrap();
        assert!((l - 1.0).abs() < 1e-14 && (z0 - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn json_shape() {
        let p = CanonicalParams::log(Hyperbolic, 1.5, c(0.0, -2.0));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"family":"log","K":-1,"lambda":1.5,"z0":[0.0,-2.0]}"#);
        let q: CanonicalParams = serde_json::from_str(r#"{"family":"Power","K":0,"gamma":0.5,"lambda":1,"z0":[-1,1]}"#).unwrap();
        assert_eq!(q.gamma, 0.5);
    }
}
