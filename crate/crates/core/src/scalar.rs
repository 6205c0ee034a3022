//! Coefficient fields for the expression ring.
//!
//! Everything symbolic in this crate is generic over a [`Scalar`]: the exact
//! rationals ([`Rational`]) are the default and the only field for which the
//! zero test is a proof. The binary floats are supported for quick numeric
//! work; with them the algebra is exact only on dyadic data.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational numbers, always stored reduced.
pub type Rational = BigRational;

/// A coefficient field usable inside [`crate::ExpPoly`].
pub trait Scalar: Num + Signed + Clone + Debug + Send + Sync + 'static {
    fn from_integer(n: &BigInt) -> Self;

    fn to_f64(&self) -> f64;

    /// Total order used for canonical key sorting.
    fn total_cmp(&self, other: &Self) -> Ordering;

    /// Exact textual form in the expression grammar, e.g. `3`, `-1/2`.
    fn to_exact_string(&self) -> String;

    fn from_i64(n: i64) -> Self {
        Self::from_integer(&BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }
}

impl Scalar for Rational {
    fn from_integer(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    fn to_exact_string(&self) -> String {
        self.to_string()
    }
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_integer(n: &BigInt) -> Self {
                ToPrimitive::to_f64(n).unwrap_or(f64::INFINITY) as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn total_cmp(&self, other: &Self) -> Ordering {
                <$t>::total_cmp(self, other)
            }

            // Every finite float is a dyadic rational; printing it exactly keeps
            // parse-after-print lossless.
            fn to_exact_string(&self) -> String {
                match BigRational::from_float(*self as f64) {
                    Some(r) => r.to_string(),
                    None => self.to_string(),
                }
            }
        }
    };
}

impl_float_scalar!(f64);
impl_float_scalar!(f32);

pub(crate) fn is_zero<T: Scalar>(x: &T) -> bool {
    Zero::is_zero(x)
}
