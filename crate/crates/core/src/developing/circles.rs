use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::DevelopingMap;
use crate::error::{Error, Result};
use crate::geometry::{circle_through, ComplexPt, GeneralizedCircle};

/// A circle fitted through three samples and its chordal residual on further samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleFit {
    pub circle: GeneralizedCircle<f64>,
    pub residual: f64,
}

/// Fits the first, middle and last sample and measures the rest.
pub fn fit_samples(samples: &[ComplexPt<f64>]) -> Result<CircleFit> {
    if samples.len() < 3 {
        return Err(Error::DegenerateFit(format!("{} samples", samples.len())));
    }
    let n = samples.len();
    let picks = [0, n / 2, n - 1];
    let circle = circle_through(samples[picks[0]], samples[picks[1]], samples[picks[2]])
        .map_err(|e| Error::DegenerateFit(e.to_string()))?;
    let residual = samples
        .iter()
        .enumerate()
        .filter(|(i, _)| !picks.contains(i))
        .map(|(_, p)| circle.chordal_distance(*p))
        .fold(0.0, f64::max);
    Ok(CircleFit { circle, residual })
}

/// Fits the image of the real segment `(lo, hi)` under `dm` by a generalized circle.
///
/// Samples are Chebyshev-spaced strictly inside the segment: three are used for the fit
/// and twenty for the residual.
pub fn boundary_circles(dm: &DevelopingMap, lo: f64, hi: f64) -> Result<CircleFit> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::DomainError(format!("bad interval ({lo}, {hi})")));
    }
    let n = 23;
    let samples = (0..n)
        .map(|j| {
            let s = 0.5 * (1.0 - (std::f64::consts::PI * (j as f64 + 0.5) / n as f64).cos());
            let t = lo + (hi - lo) * s;
            Ok(dm.chart_jet(Complex64::new(t, 0.0))?.value())
        })
        .collect::<Result<Vec<_>>>()?;
    fit_samples(&samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::developing::solve_global;

    #[test]
    fn log_maps_positive_axis_to_real_line() {
        let fit = boundary_circles(&solve_global(0.5), 1e-3, 0.5).unwrap();
        assert!(fit.residual < 1e-12);
        assert!(fit.circle.is_line() && fit.circle.d.abs() < 1e-12);
    }

    #[test]
    fn square_root_maps_negative_axis_to_imaginary_axis() {
        let fit = boundary_circles(&solve_global(0.375), -0.5, -1e-3).unwrap();
        assert!(fit.residual < 1e-12);
        assert!(fit.circle.is_line());
        assert!(fit.circle.b.im.abs() < 1e-12 && fit.circle.d.abs() < 1e-12);
    }
}
