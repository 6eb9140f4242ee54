//! Series solutions of `y'' + Q y / 2 = 0` at a regular singular point.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Chart, ChartJet, ComplexPt, Jet3};
use crate::schwarzian::{indicial_roots, IndicialRoots, SchwarzianSpec};

/// Local fundamental system at a singular point, in the local coordinate `u`.
///
/// With `λ₁ ≤ λ₂` and `N = λ₂ − λ₁`:
/// * `y2 = u^{λ₂} Σ a_n uⁿ` is always a pure power series;
/// * `y1 = u^{λ₁} Σ b_n uⁿ + k · y2 · log u`, where `k` can be nonzero only for integer `N ≥ 1`.
///
/// At a double root (`N = 0`) the roles change: `y1 = u^λ Σ a_n uⁿ` is pure and
/// `y2 = y1 log u + u^λ Σ b_n uⁿ` with `b_0 = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrobeniusSeries {
    pub roots: IndicialRoots,
    /// Taylor coefficients of `u² Q` at the singular point.
    pub p: Vec<Complex64>,
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    pub k: Complex64,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl FrobeniusSeries {
    /// Builds the series from the coefficients of `u² Q(u)`; `p[0]` must be real.
    pub fn from_coefficients(p: Vec<Complex64>, n_terms: usize) -> Result<Self> {
        if n_terms < 4 {
            return Err(Error::DomainError(format!("n_terms = {n_terms} < 4")));
        }
        if p[0].im != 0.0 {
            return Err(Error::DomainError(format!("leading coefficient {} is not real", p[0])));
        }
        let roots = indicial_roots(p[0].re)?;
        let pk = |k: usize| p.get(k).copied().unwrap_or_else(zero);
        let conv = |c: &[Complex64], n: usize| -> Complex64 { (1..=n).map(|k| pk(k) * c[n - k]).sum::<Complex64>() * 0.5 };
        let indicial = |lam: f64| lam * lam - lam + p[0].re * 0.5;
        let big_n = roots.difference();

        let mut a = vec![zero(); n_terms];
        let mut b = vec![zero(); n_terms];
        let mut k = zero();
        if roots.resonance() == Some(0) {
            let lam = roots.lambda1;
            a[0] = Complex64::new(1.0, 0.0);
            for n in 1..n_terms {
                a[n] = -conv(&a, n) / indicial(lam + n as f64);
            }
            for n in 1..n_terms {
                let nf = n as f64;
                b[n] = -(conv(&b, n) + a[n] * 2.0 * nf) / (nf * nf);
            }
            k = Complex64::new(1.0, 0.0);
        } else {
            a[0] = Complex64::new(1.0, 0.0);
            for n in 1..n_terms {
                a[n] = -conv(&a, n) / indicial(roots.lambda2 + n as f64);
            }
            b[0] = Complex64::new(1.0, 0.0);
            let res = roots.resonance();
            for n in 1..n_terms {
                match res {
                    Some(nn) if n == nn => {
                        k = -conv(&b, n) / (a[0] * big_n);
                        b[n] = zero();
                    }
                    Some(nn) if n > nn => {
                        let m = n - nn;
                        let log_part = k * a[m] * (2.0 * m as f64 + big_n);
                        b[n] = -(conv(&b, n) + log_part) / indicial(roots.lambda1 + n as f64);
                    }
                    _ => b[n] = -conv(&b, n) / indicial(roots.lambda1 + n as f64),
                }
            }
        }
        Ok(FrobeniusSeries { roots, p, a, b, k })
    }

    pub fn is_double_root(&self) -> bool {
        self.roots.resonance() == Some(0)
    }

    /// `(y1, y2)` as jets, for a local coordinate jet `u` in the closed upper half-plane.
    pub fn eval(&self, u: &Jet3<f64>) -> (Jet3<f64>, Jet3<f64>) {
        let series = |c: &[Complex64]| {
            let mut acc = Jet3::constant(zero());
            for x in c.iter().rev() {
                acc = acc * *u + *x;
            }
            acc
        };
        let log = u.ln_upper();
        let power = |lam: f64| {
            if lam == 0.0 {
                Jet3::constant(Complex64::new(1.0, 0.0))
            } else {
                (log * Complex64::new(lam, 0.0)).exp()
            }
        };
        if self.is_double_root() {
            let pw = power(self.roots.lambda1);
            let y1 = pw * series(&self.a);
            let y2 = y1 * log + pw * series(&self.b);
            (y1, y2)
        } else {
            let y2 = power(self.roots.lambda2) * series(&self.a);
            let mut y1 = power(self.roots.lambda1) * series(&self.b);
            if self.k.norm() > 0.0 {
                y1 = y1 + y2 * log * self.k;
            }
            (y1, y2)
        }
    }

    /// Jet of the quotient `y2/y1` in the chart that keeps it bounded.
    pub fn quotient(&self, u: &Jet3<f64>) -> ChartJet<f64> {
        let (y1, y2) = self.eval(u);
        if y2.f0.norm() <= y1.f0.norm() {
            ChartJet { chart: Chart::Direct, jet: y2 / y1 }
        } else {
            ChartJet { chart: Chart::Inverted, jet: -(y1 / y2) }
        }
    }

    /// Limit of `y2/y1` at the singular point.
    pub fn quotient_limit(&self) -> ComplexPt<f64> {
        if self.is_double_root() {
            ComplexPt::Infinity
        } else {
            ComplexPt::Finite(zero())
        }
    }
}

/// Coefficients of `u² Q(q_i + u)` for the pole with index `i`.
pub(crate) fn local_coefficients(spec: &SchwarzianSpec, i: usize, n: usize) -> Result<Vec<Complex64>> {
    let mut p = vec![zero(); n.max(2)];
    match spec {
        SchwarzianSpec::Global { global_c } => {
            if i != 0 {
                return Err(Error::DomainError(format!("pole index {i} out of range")));
            }
            p[0] = Complex64::new(global_c[0], global_c[1]);
        }
        SchwarzianSpec::Poles { poles } => {
            let own = poles.get(i).ok_or_else(|| Error::DomainError(format!("pole index {i} out of range")))?;
            p[0] = own.alpha.into();
            p[1] = own.beta.into();
            for (j, other) in poles.iter().enumerate() {
                if j == i {
                    continue;
                }
                let d = other.q - own.q;
                for kk in 0..n.saturating_sub(2) {
                    let dk = d.powi(kk as i32 + 1);
                    p[kk + 2] += other.alpha * (kk as f64 + 1.0) / (dk * d) - other.beta / dk;
                }
            }
        }
    }
    p.truncate(n.max(2));
    Ok(p)
}

/// Frobenius series at the pole `q_i` of the spec, with `n_terms` coefficients per series.
pub fn frobenius_seed(spec: &SchwarzianSpec, i: usize, n_terms: usize) -> Result<FrobeniusSeries> {
    let p = local_coefficients(spec, i, n_terms)?;
    FrobeniusSeries::from_coefficients(p, n_terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schwarzian::Pole;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn free_equation_at_zero() {
        let spec = SchwarzianSpec::poles(vec![Pole { q: 0.0, alpha: 0.0, beta: 0.0 }]);
        let f = frobenius_seed(&spec, 0, 8).unwrap();
        assert_eq!((f.roots.lambda1, f.roots.lambda2), (0.0, 1.0));
        assert_eq!(f.k, c(0.0, 0.0));
        let u = Jet3::variable(c(0.3, 0.2));
        let (y1, y2) = f.eval(&u);
        assert!((y1.f0 - 1.0).norm() < 1e-15);
        assert!((y2.f0 - u.f0).norm() < 1e-15);
    }

    #[test]
    fn double_root_gives_log() {
        let f = frobenius_seed(&SchwarzianSpec::global(c(0.5, 0.0)), 0, 8).unwrap();
        let z = c(0.4, 0.7);
        let q = f.quotient(&Jet3::variable(z));
        let g = q.direct().unwrap();
        assert!((g.f0 - z.ln()).norm() < 1e-14);
        assert!(f.quotient_limit().is_infinite());
    }

    #[test]
    fn euler_quotient_is_square_root() {
        let f = frobenius_seed(&SchwarzianSpec::global(c(0.375, 0.0)), 0, 8).unwrap();
        assert_eq!(f.k, c(0.0, 0.0));
        let z = c(0.4, 0.7);
        let g = f.quotient(&Jet3::variable(z)).direct().unwrap();
        assert!((g.f0 - z.sqrt()).norm() < 1e-14);
    }

    #[test]
    fn resonant_series_solve_the_equation() {
        // α = 0 with β ≠ 0 forces a logarithmic term
        let spec = SchwarzianSpec::poles(vec![
            Pole { q: 0.0, alpha: 0.0, beta: 0.3 },
            Pole { q: 2.0, alpha: 0.25, beta: -0.3 },
        ]);
        let f = frobenius_seed(&spec, 0, 40).unwrap();
        assert!(f.k.norm() > 1e-3);
        for z in [c(0.1, 0.05), c(-0.08, 0.1), c(0.0, 0.15)] {
            let (y1, y2) = f.eval(&Jet3::variable(z));
            let q = spec.eval(z).unwrap();
            for y in [y1, y2] {
                let r = y.f2 + q * y.f0 * 0.5;
                assert!(r.norm() < 1e-12 * y.f0.norm().max(1.0), "{r}");
            }
        }
    }
}
