use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Jet3;

/// Symmetry of a factor across the real axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryTag {
    /// Real coefficients, so `F(r)` is real on the real axis.
    RealOnReal,
    /// `F(z) · conj F(z̄) = 1`, so `|F(r)| = 1` on the real axis.
    Unimodular,
}

/// A finite Laurent series `Σ_{k=m}^{M} a_k z^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricFactor {
    pub min_power: i32,
    pub coeffs: Vec<Complex64>,
    pub tag: SymmetryTag,
}

impl SymmetricFactor {
    /// Validates the symmetry claimed by `tag`.
    pub fn new(min_power: i32, coeffs: Vec<Complex64>, tag: SymmetryTag) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::SymmetryViolation("empty Laurent series".into()));
        }
        let f = SymmetricFactor { min_power, coeffs, tag };
        f.check()?;
        Ok(f)
    }

    pub fn one() -> Self {
        SymmetricFactor::real(0, &[1.0])
    }

    pub fn zero() -> Self {
        SymmetricFactor::real(0, &[0.0])
    }

    /// `z^n`.
    pub fn monomial(n: i32) -> Self {
        SymmetricFactor::real(n, &[1.0])
    }

    pub fn real(min_power: i32, coeffs: &[f64]) -> Self {
        SymmetricFactor {
            min_power,
            coeffs: coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
            tag: SymmetryTag::RealOnReal,
        }
    }

    /// The unimodular constant `e^{iθ}`.
    pub fn unimodular(theta: f64) -> Self {
        SymmetricFactor {
            min_power: 0,
            coeffs: vec![Complex64::from_polar(1.0, theta)],
            tag: SymmetryTag::Unimodular,
        }
    }

    fn check(&self) -> Result<()> {
        match self.tag {
            SymmetryTag::RealOnReal => {
                if let Some(c) = self.coeffs.iter().find(|c| c.im != 0.0) {
                    return Err(Error::SymmetryViolation(format!("coefficient {c} is not real")));
                }
            }
            SymmetryTag::Unimodular => {
                for k in 0..20 {
                    let t = 0.15 + 0.145 * k as f64;
                    let z = Complex64::from_polar(0.3 + 0.2 * k as f64, t);
                    let p = self.eval(z) * self.eval(z.conj()).conj();
                    if (p - 1.0).norm() > 1e-12 {
                        return Err(Error::SymmetryViolation(format!(
                            "F(z) conj F(conj z) = {p} at z = {z}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc * z.powi(self.min_power)
    }

    pub fn eval_jet(&self, z: &Jet3<f64>) -> Jet3<f64> {
        let mut acc = Jet3::constant(Complex64::new(0.0, 0.0));
        for c in self.coeffs.iter().rev() {
            acc = acc * *z + *c;
        }
        if self.min_power == 0 {
            acc
        } else {
            acc * z.powi(self.min_power)
        }
    }

    /// Order at the origin: lowest power with a nonzero coefficient (negative for a pole).
    pub fn order_at_zero(&self) -> Option<i32> {
        self.coeffs.iter().position(|c| c.norm() > 0.0).map(|i| self.min_power + i as i32)
    }

    pub fn is_zero(&self) -> bool {
        self.order_at_zero().is_none()
    }

    /// `F(0)` when finite.
    pub fn value_at_zero(&self) -> Option<Complex64> {
        match self.order_at_zero() {
            None => Some(Complex64::new(0.0, 0.0)),
            Some(k) if k > 0 => Some(Complex64::new(0.0, 0.0)),
            Some(0) => Some(self.coeffs[(-self.min_power) as usize]),
            Some(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_complex_real_on_real() {
        let r = SymmetricFactor::new(0, vec![Complex64::new(1.0, 0.1)], SymmetryTag::RealOnReal);
        assert!(matches!(r, Err(Error::SymmetryViolation(_))));
    }

    #[test]
    fn unimodular_constant_passes_and_monomial_fails() {
        let u = SymmetricFactor::unimodular(0.7);
        assert!(SymmetricFactor::new(0, u.coeffs.clone(), SymmetryTag::Unimodular).is_ok());
        let bad = SymmetricFactor::new(1, vec![Complex64::new(1.0, 0.0)], SymmetryTag::Unimodular);
        assert!(bad.is_err());
    }

    #[test]
    fn orders_and_values() {
        let f = SymmetricFactor::real(-1, &[2.0, 0.0, 3.0]);
        assert_eq!(f.order_at_zero(), Some(-1));
        assert_eq!(f.value_at_zero(), None);
        let z = Complex64::new(0.5, 0.5);
        assert!((f.eval(z) - (z.inv() * 2.0 + z * 3.0)).norm() < 1e-15);
        let j = f.eval_jet(&Jet3::variable(z));
        assert!((j.f1 - (-(z * z).inv() * 2.0 + 3.0)).norm() < 1e-14);
        assert_eq!(SymmetricFactor::real(0, &[0.0, 1.0]).value_at_zero(), Some(Complex64::new(0.0, 0.0)));
    }
}
