//! Scalar abstractions shared by the distribution and root-finding code.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::{HiFloat, Rational};

/// A number type closed under the field operations.
///
/// Implemented for `f32`, `f64`, [`Rational`] and [`HiFloat`]. Exact types
/// report a zero [`tolerance`](Scalar::tolerance).
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Absolute tolerance used when comparing probabilities.
    fn tolerance() -> Self;

    /// `num / den`, exact where the type allows.
    fn from_ratio(num: i64, den: u64) -> Self;

    fn from_rational(q: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    fn from_u64(v: u64) -> Self {
        Self::from_ratio(v as i64, 1)
    }

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

/// A [`Scalar`] approximating the reals, with the transcendental functions
/// the bottleneck solver and Poisson masses need.
pub trait RealScalar: Scalar {
    fn from_f64(v: f64) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
}

macro_rules! impl_float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            fn tolerance() -> Self {
                $tol
            }

            fn from_ratio(num: i64, den: u64) -> Self {
                (num as f64 / den as f64) as $t
            }

            fn from_rational(q: &Rational) -> Self {
                ToPrimitive::to_f64(q).unwrap_or(f64::NAN) as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }

        impl RealScalar for $t {
            fn from_f64(v: f64) -> Self {
                v as $t
            }

            fn exp(&self) -> Self {
                <$t>::exp(*self)
            }

            fn ln(&self) -> Self {
                <$t>::ln(*self)
            }
        }
    };
}

impl_float_scalar!(f64, 1e-12);
impl_float_scalar!(f32, 1e-5);

impl Scalar for Rational {
    fn tolerance() -> Self {
        Rational::zero()
    }

    fn from_ratio(num: i64, den: u64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for HiFloat {
    fn tolerance() -> Self {
        HiFloat::from_f64(1e-12)
    }

    fn from_ratio(num: i64, den: u64) -> Self {
        HiFloat::from_i64(num) / HiFloat::from_u64(den)
    }

    fn from_rational(q: &Rational) -> Self {
        HiFloat::from_rational(q)
    }

    fn to_f64(&self) -> f64 {
        HiFloat::to_f64(self)
    }
}

impl RealScalar for HiFloat {
    fn from_f64(v: f64) -> Self {
        HiFloat::from_f64(v)
    }

    fn exp(&self) -> Self {
        HiFloat::exp(self)
    }

    fn ln(&self) -> Self {
        HiFloat::ln(self)
    }
}
