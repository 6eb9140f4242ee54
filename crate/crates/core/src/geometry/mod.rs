//! Riemann sphere geometry: points, jets, Möbius maps, generalized circles and curvature.

pub mod circle;
pub mod curvature;
pub mod jet;
pub mod mobius;
pub mod point;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scalar::Real;

pub use circle::{circle_through, classify_intersection, GeneralizedCircle, IntersectionResult};
pub use curvature::{geodesic_curvature, spherical_derivative};
pub use jet::{Chart, ChartJet, Jet3};
pub use mobius::{isometry_normal_form, JetFn, Mobius, SphereMap};
pub use point::{cross_ratio, ComplexPt};

/// Sign of the constant curvature of the model space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Curvature {
    Hyperbolic,
    Flat,
    Spherical,
}

impl Curvature {
    pub const ALL: [Curvature; 3] = [Curvature::Hyperbolic, Curvature::Flat, Curvature::Spherical];

    pub fn value<T: Real>(self) -> T {
        T::from_i8(i8::from(self)).unwrap()
    }
}

impl From<Curvature> for i8 {
    fn from(k: Curvature) -> i8 {
        match k {
            Curvature::Hyperbolic => -1,
            Curvature::Flat => 0,
            Curvature::Spherical => 1,
        }
    }
}

impl TryFrom<i8> for Curvature {
    type Error = Error;
    fn try_from(k: i8) -> Result<Self, Error> {
        match k {
            -1 => Ok(Curvature::Hyperbolic),
            0 => Ok(Curvature::Flat),
            1 => Ok(Curvature::Spherical),
            _ => Err(Error::DomainError(format!("curvature must be -1, 0 or 1, got {k}"))),
        }
    }
}

impl fmt::Display for Curvature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", i8::from(*self))
    }
}
