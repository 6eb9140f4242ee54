//! Constant-curvature conformal metrics on the upper half-plane with boundary singularities.
//!
//! The crate builds, classifies and numerically checks solutions of
//! `Δv + 2K e^v = 0` on the upper half-plane with Neumann data `∂v/∂t = c e^{v/2}` on the
//! two half-axes, through their developing maps into the sphere, the plane or the disk.

// negated float comparisons are how NaN inputs get rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod canonical;
pub mod cli;
pub mod developing;
pub mod error;
pub mod geometry;
pub mod polygon;
pub mod quadrature;
pub mod scalar;
pub mod schwarzian;
pub mod validity;
pub mod verification;

pub use error::{Error, Result};
pub use geometry::{ComplexPt, Curvature, GeneralizedCircle, Jet3, Mobius};
pub use scalar::{Cx, Real};

pub type Mobius64 = Mobius<f64>;
pub type Mobius32 = Mobius<f32>;
pub type Jet64 = Jet3<f64>;
pub type Jet32 = Jet3<f32>;
pub type Circle64 = GeneralizedCircle<f64>;
pub type Circle32 = GeneralizedCircle<f32>;
pub type Point64 = ComplexPt<f64>;
pub type Point32 = ComplexPt<f32>;
