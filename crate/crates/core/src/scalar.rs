//! Scalar types the linear algebra and GPT layers are generic over.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// A field element usable as a matrix entry.
///
/// Implemented for `f32`, `f64` and `BigRational`. Constants in the square-bit
/// catalog are all of the form `n/2` with small `n`, which every implementor
/// represents exactly.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Signed
    + Send
    + Sync
    + 'static
{
    /// Hashable canonical form, used for catalog lookups.
    type Key: Hash + Eq + Clone + Debug + Send + Sync;

    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn to_f64(&self) -> f64;

    fn key(&self) -> Self::Key;

    /// True when arithmetic never rounds.
    const EXACT: bool;
}

/// Scalars with exact arithmetic and a total order. The simplex kernel and
/// the strategy search only accept these.
pub trait ExactScalar: Scalar + Ord + Hash + Eq {
    /// Renders as `"p/q"` with `q > 0`, including integers (`"1/1"`).
    fn to_fraction_string(&self) -> String;
}

impl Scalar for BigRational {
    type Key = BigRational;
    const EXACT: bool = true;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn key(&self) -> Self::Key {
        self.clone()
    }
}

impl ExactScalar for BigRational {
    fn to_fraction_string(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

macro_rules! impl_float_scalar {
    ($f:ty, $bits:ty) => {
        impl Scalar for $f {
            type Key = $bits;
            const EXACT: bool = false;

            fn from_ratio(numer: i64, denom: i64) -> Self {
                <$f>::from_i64(numer).unwrap() / <$f>::from_i64(denom).unwrap()
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn key(&self) -> Self::Key {
                // -0.0 and 0.0 must land in the same bucket
                if *self == 0.0 {
                    (0.0 as $f).to_bits()
                } else {
                    self.to_bits()
                }
            }
        }
    };
}

impl_float_scalar!(f32, u32);
impl_float_scalar!(f64, u64);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_is_reduced() {
        let r = BigRational::from_ratio(6, -8);
        assert_eq!(r.to_fraction_string(), "-3/4");
        assert_eq!(BigRational::from_int(1).to_fraction_string(), "1/1");
        assert_eq!(BigRational::zero().to_fraction_string(), "0/1");
    }

    #[test]
    fn float_keys_merge_signed_zero() {
        assert_eq!((-0.0f64).key(), 0.0f64.key());
        assert_eq!(f32::from_ratio(3, 2), 1.5);
    }
}
