//! Fixed-precision big floats.
//!
//! [`HiFloat`] wraps an `astro-float` value at a fixed 576-bit mantissa and
//! gives it ordinary operator syntax. Bounds such as `e^582` overflow `f64`;
//! they are evaluated and compared here instead.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::Rational;

/// Mantissa width in bits.
pub const HI_PRECISION: usize = 576;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

#[derive(Clone, Debug)]
pub struct HiFloat(BigFloat);

impl HiFloat {
    pub fn from_u64(v: u64) -> Self {
        HiFloat(BigFloat::from_u64(v, HI_PRECISION))
    }

    pub fn from_i64(v: i64) -> Self {
        HiFloat(BigFloat::from_i64(v, HI_PRECISION))
    }

    pub fn from_f64(v: f64) -> Self {
        HiFloat(BigFloat::from_f64(v, HI_PRECISION))
    }

    /// Exact when `v` fits in the mantissa.
    pub fn from_biguint(v: &BigUint) -> Self {
        let base = HiFloat::from_u64(1 << 32);
        v.to_u32_digits()
            .iter()
            .rev()
            .fold(HiFloat::zero(), |acc, &d| acc * base.clone() + HiFloat::from_u64(d as u64))
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        let mag = HiFloat::from_biguint(v.magnitude());
        if v.sign() == Sign::Minus {
            -mag
        } else {
            mag
        }
    }

    pub fn from_rational(q: &Rational) -> Self {
        HiFloat::from_bigint(q.numer()) / HiFloat::from_bigint(q.denom())
    }

    /// Euler's number.
    pub fn e() -> Self {
        with_consts(|cc| HiFloat(cc.e(HI_PRECISION, RM)))
    }

    pub fn pi() -> Self {
        with_consts(|cc| HiFloat(cc.pi(HI_PRECISION, RM)))
    }

    pub fn exp(&self) -> Self {
        with_consts(|cc| HiFloat(self.0.exp(HI_PRECISION, RM, cc)))
    }

    pub fn ln(&self) -> Self {
        with_consts(|cc| HiFloat(self.0.ln(HI_PRECISION, RM, cc)))
    }

    pub fn sqrt(&self) -> Self {
        HiFloat(self.0.sqrt(HI_PRECISION, RM))
    }

    /// Integer power by repeated squaring; `x^0 = 1` exactly.
    pub fn powi(&self, n: usize) -> Self {
        if n == 0 {
            return HiFloat::one();
        }
        HiFloat(self.0.powi(n, HI_PRECISION, RM))
    }

    /// `e^n` for integer `n`, exact at `n = 0`.
    pub fn exp_int(n: i64) -> Self {
        match n.cmp(&0) {
            Ordering::Equal => HiFloat::one(),
            Ordering::Greater => HiFloat::e().powi(n as usize),
            Ordering::Less => HiFloat::one() / HiFloat::e().powi(n.unsigned_abs() as usize),
        }
    }

    pub fn is_nan(&self) -> bool {
        self.0.is_nan()
    }

    pub fn is_finite(&self) -> bool {
        !self.0.is_nan() && !self.0.is_inf()
    }

    /// Nearest `f64` (via decimal formatting); saturates to ±inf.
    pub fn to_f64(&self) -> f64 {
        if self.0.is_nan() {
            return f64::NAN;
        }
        if self.0.is_zero() {
            return 0.0;
        }
        let text = with_consts(|cc| self.0.format(Radix::Dec, RM, cc)).unwrap_or_default();
        text.parse::<f64>().unwrap_or(f64::NAN)
    }

    /// Natural logarithm as `f64`, usable when the value itself overflows.
    pub fn ln_f64(&self) -> f64 {
        self.ln().to_f64()
    }

    pub fn inner(&self) -> &BigFloat {
        &self.0
    }
}

impl fmt::Display for HiFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_f64();
        if v.is_finite() && v != 0.0 && (v.abs() >= 1e15 || v.abs() < 1e-6) {
            write!(f, "{v:e}")
        } else if v.is_finite() {
            write!(f, "{v}")
        } else {
            // Out of f64 range: print through the logarithm.
            write!(f, "exp({:.6})", self.ln().to_f64())
        }
    }
}

impl PartialEq for HiFloat {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for HiFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for HiFloat {
            type Output = HiFloat;
            fn $m(self, rhs: HiFloat) -> HiFloat {
                HiFloat(self.0.$m(&rhs.0, HI_PRECISION, RM))
            }
        }

        impl<'a> $tr<&'a HiFloat> for &'a HiFloat {
            type Output = HiFloat;
            fn $m(self, rhs: &'a HiFloat) -> HiFloat {
                HiFloat(self.0.$m(&rhs.0, HI_PRECISION, RM))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for HiFloat {
    type Output = HiFloat;
    fn neg(self) -> HiFloat {
        HiFloat(self.0.neg())
    }
}

impl Zero for HiFloat {
    fn zero() -> Self {
        HiFloat::from_u64(0)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for HiFloat {
    fn one() -> Self {
        HiFloat::from_u64(1)
    }
}
