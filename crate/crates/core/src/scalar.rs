use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Scalar type the solvers are generic over: `f32` or `f64`.
///
/// Everything numeric in this crate is written against this trait; the
/// concrete choice only fixes precision. Tolerances quoted in the docs
/// assume `f64`.
pub trait Scalar: Float + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static {
    /// Convert an `f64` constant into the scalar type.
    #[inline]
    fn real(v: f64) -> Self {
        Self::from_f64(v).expect("constant must be representable in the scalar type")
    }

    /// Lossy conversion back to `f64`, for reporting and error messages.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
