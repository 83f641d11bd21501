use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Scalar type the whole library is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap()
    }

    /// A tolerance that never drops below a few ulps of the type.
    fn tol(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(16.0))
    }

    fn usize(n: usize) -> Self {
        Self::from_usize(n).unwrap()
    }

    fn f64(self) -> f64 {
        self.to_f64().unwrap()
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type C<T> = Complex<T>;

pub(crate) fn cr<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

pub(crate) fn ci<T: Real>(y: T) -> C<T> {
    Complex::new(T::zero(), y)
}

pub(crate) fn one<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

/// e^{iθ}
pub(crate) fn cis<T: Real>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}

pub(crate) fn finite<T: Real>(z: C<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
