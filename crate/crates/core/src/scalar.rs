//! Real scalar abstraction.
//!
//! Everything exact (norms, counts, factorizations) is done on machine
//! integers. Quantities that are genuinely real-valued (character sums,
//! angles, Euler products, measures) are generic over [`Real`], which is
//! implemented for `f32` and `f64`. Accuracy statements in this crate refer
//! to `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Send + Sync + Debug + Display + 'static
{
    #[inline]
    fn of_u64(n: u64) -> Self {
        Self::from_u64(n).expect("u64 is representable in every float type")
    }

    #[inline]
    fn of_i64(n: i64) -> Self {
        Self::from_i64(n).expect("i64 is representable in every float type")
    }

    #[inline]
    fn of_i128(n: i128) -> Self {
        Self::from_i128(n).expect("i128 is representable in every float type")
    }

    #[inline]
    fn of_f64(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}
