//! Scalar abstractions shared by the geometric and analytic code.
//!
//! [`Scalar`] is the minimal ordered-field interface needed by the reduction
//! algorithms: it is implemented by `f32`, `f64`, exact rationals
//! ([`BigRational`]) and by [`BigInt`], the latter standing for fixed-point
//! mantissas that share one implicit scale. Everything that also needs
//! transcendental functions asks for [`Real`], which layers `num_traits::Float`
//! on top.

use std::fmt::{Debug, Display, LowerExp};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive, Zero};

pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static
{
    fn of_i64(v: i64) -> Self;

    /// Nearest `f64`; for [`BigInt`] this is the unscaled mantissa.
    fn as_f64(&self) -> f64;

    fn floor_i64(&self) -> Option<i64>;

    /// Nearest integer to `num / den` for `den > 0`, halves rounded up.
    fn nearest_quotient(num: &Self, den: &Self) -> Option<i64>;

    /// Smallest imaginary part a reduction may start from, `None` for exact types.
    fn precision_floor() -> Option<Self>;

    fn mul_i64(&self, k: i64) -> Self {
        self.clone() * Self::of_i64(k)
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            #[inline]
            fn of_i64(v: i64) -> Self {
                v as $t
            }
            #[inline]
            fn as_f64(&self) -> f64 {
                *self as f64
            }
            #[inline]
            fn floor_i64(&self) -> Option<i64> {
                let f = Float::floor(*self);
                if f.is_finite() && f.abs() < 9.0e18 {
                    Some(f as i64)
                } else {
                    None
                }
            }
            #[inline]
            fn nearest_quotient(num: &Self, den: &Self) -> Option<i64> {
                (num / den + 0.5).floor_i64()
            }
            fn precision_floor() -> Option<Self> {
                Some(<$t as Float>::epsilon().sqrt())
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl Scalar for BigRational {
    fn of_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
    fn floor_i64(&self) -> Option<i64> {
        self.floor().to_integer().to_i64()
    }
    fn nearest_quotient(num: &Self, den: &Self) -> Option<i64> {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        (num / den + half).floor_i64()
    }
    fn precision_floor() -> Option<Self> {
        None
    }
}

impl Scalar for BigInt {
    fn of_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
    fn floor_i64(&self) -> Option<i64> {
        self.to_i64()
    }
    fn nearest_quotient(num: &Self, den: &Self) -> Option<i64> {
        // floor((2 num + den) / (2 den)), den > 0
        let two_den: BigInt = den << 1u32;
        let shifted: BigInt = (num << 1u32) + den;
        num_integer::Integer::div_floor(&shifted, &two_den).to_i64()
    }
    fn precision_floor() -> Option<Self> {
        None
    }
    fn mul_i64(&self, k: i64) -> Self {
        if k.is_zero() {
            BigInt::zero()
        } else {
            self * k
        }
    }
}

/// Floating scalar with transcendental functions.
pub trait Real:
    Scalar + Float + FloatConst + FromPrimitive + Display + LowerExp + Default + Copy
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("finite literal")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Splits a big integer into `(m, e)` with `v ≈ m · 2^e` and `|m| < 2^64`,
/// so that very large mantissas convert without overflowing `f64`.
pub fn big_to_scaled_f64(v: &BigInt) -> (f64, i64) {
    let bits = v.bits() as i64;
    if bits <= 1000 {
        return (v.to_f64().unwrap_or(0.0), 0);
    }
    let shift = bits - 64;
    let top: BigInt = v >> (shift as usize);
    (top.to_f64().unwrap_or(0.0), shift)
}

/// `num / den` for big integers, evaluated without intermediate overflow.
pub fn big_ratio_f64(num: &BigInt, den: &BigInt) -> f64 {
    let (m1, e1) = big_to_scaled_f64(num);
    let (m2, e2) = big_to_scaled_f64(den);
    let e = e1 - e2;
    (m1 / m2) * 2f64.powi(e.clamp(-1100, 1100) as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_quotient_rounds_halves_up() {
        assert_eq!(f64::nearest_quotient(&2.5, &1.0), Some(3));
        assert_eq!(f64::nearest_quotient(&-2.5, &1.0), Some(-2));
        assert_eq!(f64::nearest_quotient(&7.0, &2.0), Some(4));
        let n = BigInt::from(-5);
        let d = BigInt::from(2);
        assert_eq!(BigInt::nearest_quotient(&n, &d), Some(-2));
        assert_eq!(BigInt::nearest_quotient(&BigInt::from(7), &d), Some(4));
        assert_eq!(BigInt::nearest_quotient(&BigInt::from(6), &BigInt::from(4)), Some(2));
        let q = BigRational::new(BigInt::from(-3), BigInt::from(2));
        assert_eq!(BigRational::nearest_quotient(&q, &BigRational::of_i64(1)), Some(-1));
    }

    #[test]
    fn floor_is_floor_for_negatives() {
        assert_eq!((-0.5f64).floor_i64(), Some(-1));
        assert_eq!(f64::NAN.floor_i64(), None);
        let q = BigRational::new(BigInt::from(-1), BigInt::from(3));
        assert_eq!(q.floor_i64(), Some(-1));
    }

    #[test]
    fn scaled_ratio_handles_huge_operands() {
        let big = BigInt::from(3) << 2000usize;
        let den = BigInt::from(2) << 2000usize;
        assert!((big_ratio_f64(&big, &den) - 1.5).abs() < 1e-15);
    }
}
