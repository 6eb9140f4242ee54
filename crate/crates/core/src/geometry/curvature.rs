use super::mobius::SphereMap;
use super::Curvature;
use crate::error::{Error, Result};
use crate::scalar::{cx, Cx, Real};

/// `|g'(z)| / (1 + |g(z)|²)`, finite at poles of `g` through the chart switch.
pub fn spherical_derivative<T: Real, G: SphereMap<T> + ?Sized>(g: &G, z: Cx<T>) -> Result<T> {
    Ok(g.chart_jet(z)?.spherical_derivative())
}

fn curvature_at_step<T: Real, F: Fn(T) -> Cx<T>>(curve: &F, k: T, t: T, h: T) -> T {
    let (zm, z0, zp) = (curve(t - h), curve(t), curve(t + h));
    let d1 = (zp - zm) / (h + h);
    let d2 = (zp - z0 - z0 + zm) / (h * h);
    let speed = d1.norm();
    let k_e = (d1.conj() * d2).im / (speed * speed * speed);
    let two = T::lit(2.0);
    let den = T::one() + k * z0.norm_sqr();
    let lambda = two / den;
    let grad = -(z0 * (two * k)) / den;
    let normal = cx(-d1.im, d1.re) / speed;
    let dn = (grad.conj() * normal).re;
    (k_e - dn) / lambda
}

/// Signed geodesic curvature, in the space-form metric `4|dζ|²/(1 + K|ζ|²)²`, of a
/// parametrized curve at parameter `t`.
///
/// The sign is taken with respect to the left normal of the parametrization. Derivatives
/// are central differences at `h` and `h/2` combined by Richardson extrapolation; the
/// extrapolation error estimate must not exceed `tol`.
pub fn geodesic_curvature<T: Real, F: Fn(T) -> Cx<T>>(curve: F, k: Curvature, t: T, h: T, tol: T) -> Result<T> {
    let kk = k.value::<T>();
    let coarse = curvature_at_step(&curve, kk, t, h);
    let fine = curvature_at_step(&curve, kk, t, h * T::lit(0.5));
    let estimate = (fine - coarse).abs() / T::lit(3.0);
    if !(estimate <= tol) {
        return Err(Error::StepTooLarge {
            estimate: estimate.to_f64().unwrap_or(f64::INFINITY),
            tol: tol.to_f64().unwrap_or(0.0),
        });
    }
    Ok(fine + (fine - coarse) / T::lit(3.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::jet::Jet3;
    use crate::geometry::mobius::JetFn;
    use crate::scalar::cr;

    #[test]
    fn spherical_derivative_examples() {
        let id = JetFn(|x: Jet3<f64>| x);
        assert!((spherical_derivative(&id, cr(0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((spherical_derivative(&id, cx(0.0, 1.0)).unwrap() - 0.5).abs() < 1e-15);
        let sq = JetFn(|x: Jet3<f64>| x * x);
        assert!((spherical_derivative(&sq, cr(2.0)).unwrap() - 4.0 / 17.0).abs() < 1e-15);
    }

    #[test]
    fn circle_curvatures() {
        let circ = |r: f64| move |t: f64| cx(r * t.cos(), r * t.sin());
        let kg = |k, r| geodesic_curvature(circ(r), k, 0.3, 1e-3, 1e-6).unwrap();
        assert!(kg(Curvature::Spherical, 1.0).abs() < 1e-8);
        assert!((kg(Curvature::Flat, 1.0) - 0.5).abs() < 1e-8);
        let r = (0.5f64).tanh();
        assert!((kg(Curvature::Hyperbolic, r) - 1.0 / 1.0f64.tanh()).abs() < 1e-7);
    }
}
