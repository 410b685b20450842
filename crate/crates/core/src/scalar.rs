//! Scalar abstraction shared by every geometric and raster type.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type usable as a coordinate: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Only used for constants that are representable.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    /// Converts a pixel index or count.
    #[inline]
    fn from_index(v: usize) -> Self {
        Self::from_usize(v).expect("index representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Absolute tolerance for parallelism and on-segment tests (1e-9 px),
    /// floored at a few ulps for narrow types.
    #[inline]
    fn eps_geom() -> Self {
        Self::lit(1e-9).max(Self::epsilon() * Self::lit(4.0))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
