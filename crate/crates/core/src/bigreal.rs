//! Arbitrary-precision real numbers carrying their working precision.
//!
//! [`BigReal`] is a thin newtype over a binary `dashu` float. Every value is
//! created with an explicit precision (in bits); arithmetic between values of
//! different precision is carried out at the larger of the two.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use dashu_float::round::mode::HalfEven;
use dashu_float::{DBig, FBig};

use crate::error::{Error, Result};

type Inner = FBig<HalfEven, 2>;

/// Real number with a binary significand of `precision()` bits.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BigReal(Inner);

impl BigReal {
    pub fn zero(prec: usize) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: usize) -> Self {
        BigReal(Inner::from(v).with_precision(prec.max(1)).value())
    }

    pub fn from_u64(v: u64, prec: usize) -> Self {
        BigReal(Inner::from(v).with_precision(prec.max(1)).value())
    }

    /// Exact conversion of a finite `f64`, then rounded to `prec` bits.
    pub fn from_f64(v: f64, prec: usize) -> Result<Self> {
        let inner = Inner::try_from(v)
            .map_err(|_| Error::Parse(alloc::format!("non-finite value {v}")))?;
        Ok(BigReal(inner.with_precision(prec.max(1)).value()))
    }

    /// `2^exp` at the given precision.
    pub fn pow2(exp: isize, prec: usize) -> Self {
        BigReal(
            Inner::from_parts(1.into(), exp)
                .with_precision(prec.max(1))
                .value(),
        )
    }

    /// Parse a decimal literal such as `"0.7"`, `"-2"`, `"1.5e-3"`, correctly
    /// rounded to `prec` bits.
    pub fn parse(s: &str, prec: usize) -> Result<Self> {
        let t = s.trim();
        let dec = DBig::from_str(t).map_err(|_| Error::Parse(alloc::format!("number `{t}`")))?;
        Ok(BigReal(
            dec.with_base_and_precision::<2>(prec.max(1))
                .value()
                .with_rounding::<HalfEven>(),
        ))
    }

    pub fn precision(&self) -> usize {
        self.0.precision()
    }

    /// Round (or widen) to `prec` bits.
    pub fn with_precision(&self, prec: usize) -> Self {
        BigReal(self.0.clone().with_precision(prec.max(1)).value())
    }

    /// `self + v` without rounding; the precision widens when needed.
    pub fn add_int_exact(&self, v: i64) -> Self {
        if self.is_zero() {
            return Self::from_i64(v, self.precision());
        }
        let low = self.0.repr().exponent();
        let vbits = (64 - v.unsigned_abs().leading_zeros()) as isize;
        let top = self.log2_magnitude().unwrap_or(0).max(vbits) + 1;
        let need = (top - low).max(1) as usize;
        let prec = self.precision().max(need);
        self.with_precision(prec) + Self::from_i64(v, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.0.repr().is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0 < Inner::ZERO
    }

    pub fn is_positive(&self) -> bool {
        self.0 > Inner::ZERO
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn recip(&self) -> Self {
        Self::one(self.precision()) / self
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one(self.precision());
        for _ in 0..n {
            acc *= self;
        }
        acc
    }

    pub fn exp(&self) -> Self {
        BigReal(self.0.exp())
    }

    /// Binary exponent `e` with `2^(e-1) <= |x| < 2^e`; `None` for zero.
    pub fn log2_magnitude(&self) -> Option<isize> {
        if self.is_zero() {
            return None;
        }
        let repr = self.0.repr();
        Some(repr.exponent() + repr.digits() as isize)
    }

    /// Nearest integer (ties away from zero are irrelevant for pole tests).
    pub fn round_to_i64(&self) -> Option<i64> {
        let half = Self::pow2(-1, self.precision().max(2));
        let shifted = if self.is_negative() {
            self - &half
        } else {
            self + &half
        };
        let int = shifted.0.trunc().to_int().value();
        i64::try_from(int).ok()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    /// Scientific-notation decimal string with `digits` significant digits.
    pub fn to_sci_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let dec = self.0.clone().with_base_and_precision::<10>(digits.max(1)).value();
        alloc::format!("{dec:e}")
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(20))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        f.write_str(&self.to_sci_string(digits))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign_method:ident) => {
        impl $tr<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                BigReal($tr::$method(&self.0, &rhs.0))
            }
        }
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                BigReal($tr::$method(self.0, rhs.0))
            }
        }
        impl $tr<&BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                BigReal($tr::$method(self.0, &rhs.0))
            }
        }
        impl $tr<BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                BigReal($tr::$method(&self.0, rhs.0))
            }
        }
        impl $assign_tr<&BigReal> for BigReal {
            fn $assign_method(&mut self, rhs: &BigReal) {
                self.0 = $tr::$method(&self.0, &rhs.0);
            }
        }
        impl $assign_tr<BigReal> for BigReal {
            fn $assign_method(&mut self, rhs: BigReal) {
                self.0 = $tr::$method(&self.0, rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);
forward_binop!(Div, div, DivAssign, div_assign);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0.clone())
    }
}

impl PartialEq<i64> for BigReal {
    fn eq(&self, other: &i64) -> bool {
        self.0 == Inner::from(*other)
    }
}

impl PartialOrd<i64> for BigReal {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&Inner::from(*other))
    }
}

impl<'a> Sum<&'a BigReal> for BigReal {
    fn sum<I: Iterator<Item = &'a BigReal>>(iter: I) -> Self {
        let mut acc: Option<BigReal> = None;
        for x in iter {
            acc = Some(match acc {
                None => x.clone(),
                Some(a) => a + x,
            });
        }
        acc.unwrap_or_else(|| BigReal::zero(1))
    }
}

impl Sum<BigReal> for BigReal {
    fn sum<I: Iterator<Item = BigReal>>(iter: I) -> Self {
        let mut acc: Option<BigReal> = None;
        for x in iter {
            acc = Some(match acc {
                None => x,
                Some(a) => a + x,
            });
        }
        acc.unwrap_or_else(|| BigReal::zero(1))
    }
}

/// `|a - b| / max(|b|, floor)`; the floor keeps the ratio finite near zero.
pub fn relative_diff(a: &BigReal, b: &BigReal, floor: &BigReal) -> BigReal {
    let scale = b.abs();
    let scale = scale.max(floor.clone());
    (a - b).abs() / scale
}
