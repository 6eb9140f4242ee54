//! Scalar abstraction shared by the geometric core.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar used by the generic parts of the crate: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Default tolerance for algebraic identities, never below a few hundred ulps.
    #[inline]
    fn algebraic_tol() -> Self {
        Self::lit(1e-10).max(Self::epsilon() * Self::lit(1e3))
    }

    /// Default tolerance for finite-difference checks.
    #[inline]
    fn fd_tol() -> Self {
        Self::lit(1e-6).max(Self::epsilon().sqrt() * Self::lit(10.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a [`Real`] scalar.
pub type Cx<T> = Complex<T>;

#[inline]
pub(crate) fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn cr<T: Real>(re: T) -> Cx<T> {
    Complex::new(re, T::zero())
}

/// Argument of `z` taken in `[0, π]` for points of the closed upper half-plane.
///
/// A signed zero imaginary part on the negative real axis is read as `+0`, so the
/// negative axis always has argument `π`.
#[inline]
pub fn arg_upper<T: Real>(z: Cx<T>) -> T {
    if z.im == T::zero() {
        if z.re < T::zero() {
            T::PI()
        } else {
            T::zero()
        }
    } else {
        z.im.atan2(z.re)
    }
}

/// Principal logarithm with argument in `[0, π]` on the closed upper half-plane.
#[inline]
pub fn log_upper<T: Real>(z: Cx<T>) -> Cx<T> {
    cx(z.norm().ln(), arg_upper(z))
}
