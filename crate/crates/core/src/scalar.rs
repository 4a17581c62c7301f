//! Floating-point scalar abstraction for interval endpoints.
//!
//! Everything in this crate is generic over the endpoint type through the
//! [`Scalar`] trait; `f64` is what the proof-scale computations use, `f32`
//! exists mainly to keep the arithmetic honest about where precision enters.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FromPrimitive};

/// Endpoint type for directed-rounded interval arithmetic.
///
/// Beyond `num_traits::Float` we need two things: stepping to the adjacent
/// representable float in each direction (the outward-rounding primitive),
/// and the largest integer magnitude that converts exactly.
pub trait Scalar:
    Float + FromPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Largest `i64` magnitude representable exactly (2^mantissa_bits).
    const EXACT_INT_MAX: i64;

    /// Next representable value toward +inf. NaN and +inf map to themselves.
    fn next_up(self) -> Self;

    /// Next representable value toward -inf. NaN and -inf map to themselves.
    fn next_down(self) -> Self;

    /// Round-to-nearest conversion from `f64`.
    fn from_f64_nearest(x: f64) -> Self;

    /// Lossless widening to `f64` (exact for f32 and f64).
    fn to_f64_exact(self) -> f64;
}

macro_rules! impl_scalar {
    ($t:ty, $bits:ty, $mant:expr) => {
        impl Scalar for $t {
            const EXACT_INT_MAX: i64 = 1i64 << $mant;

            #[inline]
            fn next_up(self) -> Self {
                if self.is_nan() || self == <$t>::INFINITY {
                    return self;
                }
                let bits = if self == 0.0 {
                    1 // smallest positive subnormal
                } else if self > 0.0 {
                    self.to_bits() + 1
                } else {
                    self.to_bits() - 1
                };
                <$t>::from_bits(bits)
            }

            #[inline]
            fn next_down(self) -> Self {
                -(-self).next_up()
            }

            #[inline]
            fn from_f64_nearest(x: f64) -> Self {
                x as $t
            }

            #[inline]
            fn to_f64_exact(self) -> f64 {
                self as f64
            }
        }
    };
}

impl_scalar!(f64, u64, 53);
impl_scalar!(f32, u32, 24);
