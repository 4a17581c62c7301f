//! Closed real intervals with outward rounding.
//!
//! An [`Interval`] always satisfies `lo <= hi` with no NaN endpoints;
//! infinite endpoints are allowed. The empty set never inhabits the type:
//! the one operation that can produce it, [`Interval::intersect`], returns
//! `Option::None` as the sentinel.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::round::{add_hi, add_lo, div_hi, div_lo, mul_hi, mul_lo, sqrt_hi, sqrt_lo};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("sqrt of an interval with negative lower bound")]
    SqrtNegative,
    #[error("log of an interval not strictly positive")]
    LogNonPositive,
}

#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: Scalar> Interval<T> {
    /// Construct from endpoints. Panics on NaN or inverted endpoints; those
    /// are always logic errors in a verification tool, never data.
    #[inline]
    pub fn new(lo: T, hi: T) -> Self {
        assert!(!lo.is_nan() && !hi.is_nan(), "NaN interval endpoint");
        assert!(lo <= hi, "inverted interval endpoints");
        Interval { lo, hi }
    }

    #[inline]
    pub fn point(x: T) -> Self {
        Self::new(x, x)
    }

    #[inline]
    pub fn zero() -> Self {
        Self::point(T::zero())
    }

    #[inline]
    pub fn one() -> Self {
        Self::point(T::one())
    }

    /// The whole extended real line.
    #[inline]
    pub fn entire() -> Self {
        Interval {
            lo: T::neg_infinity(),
            hi: T::infinity(),
        }
    }

    /// Exact integer constant. Panics if `n` is not exactly representable.
    #[inline]
    pub fn int(n: i64) -> Self {
        assert!(
            n.abs() <= T::EXACT_INT_MAX,
            "integer {n} not exactly representable"
        );
        Self::point(T::from_i64(n).expect("integer conversion"))
    }

    /// Enclosure of the exact rational `num/den`.
    #[inline]
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::int(num)
            .checked_div(Self::int(den))
            .expect("ratio with zero denominator")
    }

    /// Enclosure of the real number that the `f64` is nearest to, widened by
    /// one ulp of `T` whenever the conversion can be inexact.
    #[inline]
    pub fn from_f64(x: f64) -> Self {
        let t = T::from_f64_nearest(x);
        if t.to_f64_exact() == x {
            Self::point(t)
        } else {
            Self::new(t.next_down(), t.next_up())
        }
    }

    #[inline]
    pub fn lo(self) -> T {
        self.lo
    }

    #[inline]
    pub fn hi(self) -> T {
        self.hi
    }

    #[inline]
    pub fn width(self) -> T {
        add_hi(self.hi, -self.lo)
    }

    /// Midpoint, clamped to the interval so it is always a member.
    #[inline]
    pub fn mid(self) -> T {
        if self.lo == T::neg_infinity() && self.hi == T::infinity() {
            return T::zero();
        }
        if self.lo == T::neg_infinity() {
            return -T::max_value();
        }
        if self.hi == T::infinity() {
            return T::max_value();
        }
        let two = T::one() + T::one();
        let m = self.lo / two + self.hi / two;
        m.max(self.lo).min(self.hi)
    }

    #[inline]
    pub fn is_point(self) -> bool {
        self.lo == self.hi
    }

    #[inline]
    pub fn contains(self, x: T) -> bool {
        self.lo <= x && x <= self.hi
    }

    #[inline]
    pub fn contains_interval(self, other: Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    #[inline]
    pub fn contains_zero(self) -> bool {
        self.lo <= T::zero() && T::zero() <= self.hi
    }

    #[inline]
    pub fn intersect(self, other: Self) -> Option<Self> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo <= hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    #[inline]
    pub fn hull(self, other: Self) -> Self {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Split at the (representable) midpoint; the halves cover `self` and
    /// meet exactly at the split point.
    #[inline]
    pub fn bisect(self) -> (Self, Self) {
        let m = self.mid();
        (Interval { lo: self.lo, hi: m }, Interval { lo: m, hi: self.hi })
    }

    /// |self| as an interval.
    #[inline]
    pub fn abs(self) -> Self {
        if self.lo >= T::zero() {
            self
        } else if self.hi <= T::zero() {
            -self
        } else {
            Interval {
                lo: T::zero(),
                hi: self.hi.max(-self.lo),
            }
        }
    }

    /// sup |x| over the interval.
    #[inline]
    pub fn mag(self) -> T {
        self.lo.abs().max(self.hi.abs())
    }

    /// inf |x| over the interval.
    #[inline]
    pub fn mig(self) -> T {
        if self.contains_zero() {
            T::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    #[inline]
    pub fn checked_div(self, rhs: Self) -> Result<Self, IntervalError> {
        if rhs.contains_zero() {
            return Err(IntervalError::DivisionByZero);
        }
        let (a, b) = (self, rhs);
        let (lo, hi) = if b.lo > T::zero() {
            if a.lo >= T::zero() {
                (div_lo(a.lo, b.hi), div_hi(a.hi, b.lo))
            } else if a.hi <= T::zero() {
                (div_lo(a.lo, b.lo), div_hi(a.hi, b.hi))
            } else {
                (div_lo(a.lo, b.lo), div_hi(a.hi, b.lo))
            }
        } else {
            // b.hi < 0
            if a.lo >= T::zero() {
                (div_lo(a.hi, b.hi), div_hi(a.lo, b.lo))
            } else if a.hi <= T::zero() {
                (div_lo(a.hi, b.lo), div_hi(a.lo, b.hi))
            } else {
                (div_lo(a.hi, b.hi), div_hi(a.lo, b.hi))
            }
        };
        Ok(Interval::new(lo, hi))
    }

    /// 1/self.
    #[inline]
    pub fn recip(self) -> Result<Self, IntervalError> {
        Self::one().checked_div(self)
    }

    pub fn sqrt(self) -> Result<Self, IntervalError> {
        if self.lo < T::zero() {
            return Err(IntervalError::SqrtNegative);
        }
        Ok(Interval::new(sqrt_lo(self.lo), sqrt_hi(self.hi)))
    }

    /// self^n with exact even/odd sign handling.
    pub fn pow_int(self, n: i32) -> Result<Self, IntervalError> {
        if n == 0 {
            return Ok(Self::one());
        }
        if n < 0 {
            return self.pow_int(-n)?.recip();
        }
        if n % 2 == 0 {
            // even power: image of |x|
            let a = self.abs();
            Ok(pow_pos(a, n as u32))
        } else {
            let mut r = pow_pos_signed(self, n as u32);
            // splitting at zero tightens straddling intervals
            if self.contains_zero() {
                let neg = Interval::new(self.lo, T::zero());
                let pos = Interval::new(T::zero(), self.hi);
                r = pow_pos_signed(neg, n as u32).hull(pow_pos_signed(pos, n as u32));
            }
            Ok(r)
        }
    }

    /// Scale by an exact power of two (error-free unless over/underflow).
    pub fn scale_pow2(self, k: i32) -> Self {
        let f = T::from_f64_nearest(2.0f64.powi(k));
        // powers of two convert exactly within range
        self * Self::point(f)
    }
}

/// x^n for n >= 1 by repeated squaring, monotone case (x >= 0).
fn pow_pos<T: Scalar>(x: Interval<T>, n: u32) -> Interval<T> {
    debug_assert!(x.lo() >= T::zero());
    let mut lo = T::one();
    let mut hi = T::one();
    let (mut bl, mut bh) = (x.lo(), x.hi());
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            lo = mul_lo(lo, bl);
            hi = mul_hi(hi, bh);
        }
        k >>= 1;
        if k > 0 {
            bl = mul_lo(bl, bl);
            bh = mul_hi(bh, bh);
        }
    }
    Interval::new(lo, hi)
}

/// x^n for odd n: monotone in x, endpoints map to endpoints.
fn pow_pos_signed<T: Scalar>(x: Interval<T>, n: u32) -> Interval<T> {
    let lo = pow_scalar_dir(x.lo(), n, false);
    let hi = pow_scalar_dir(x.hi(), n, true);
    Interval::new(lo, hi)
}

fn pow_scalar_dir<T: Scalar>(x: T, n: u32, up: bool) -> T {
    // interval-squaring a point tracks the rounding of every partial product
    let mut acc = Interval::point(T::one());
    let mut b = Interval::point(x);
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * b;
        }
        k >>= 1;
        if k > 0 {
            b = b * b;
        }
    }
    if up {
        acc.hi()
    } else {
        acc.lo()
    }
}

impl<T: Scalar> Neg for Interval<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl<T: Scalar> Add for Interval<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Interval::new(add_lo(self.lo, rhs.lo), add_hi(self.hi, rhs.hi))
    }
}

impl<T: Scalar> Sub for Interval<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Scalar> Mul for Interval<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (self, rhs);
        let zero = T::zero();
        // exact zero absorbs everything, including infinite endpoints
        if (a.lo == zero && a.hi == zero) || (b.lo == zero && b.hi == zero) {
            return Interval::zero();
        }
        let (lo, hi) = if a.lo >= zero {
            if b.lo >= zero {
                (mul_lo(a.lo, b.lo), mul_hi(a.hi, b.hi))
            } else if b.hi <= zero {
                (mul_lo(a.hi, b.lo), mul_hi(a.lo, b.hi))
            } else {
                (mul_lo(a.hi, b.lo), mul_hi(a.hi, b.hi))
            }
        } else if a.hi <= zero {
            if b.lo >= zero {
                (mul_lo(a.lo, b.hi), mul_hi(a.hi, b.lo))
            } else if b.hi <= zero {
                (mul_lo(a.hi, b.hi), mul_hi(a.lo, b.lo))
            } else {
                (mul_lo(a.lo, b.hi), mul_hi(a.lo, b.lo))
            }
        } else if b.lo >= zero {
            (mul_lo(a.lo, b.hi), mul_hi(a.hi, b.hi))
        } else if b.hi <= zero {
            (mul_lo(a.hi, b.lo), mul_hi(a.lo, b.lo))
        } else {
            (
                mul_lo(a.lo, b.hi).min(mul_lo(a.hi, b.lo)),
                mul_hi(a.lo, b.lo).max(mul_hi(a.hi, b.hi)),
            )
        };
        Interval::new(lo, hi)
    }
}

/// Panicking division for formula transcription where the denominator is
/// provably sign-definite; use `checked_div` wherever straddling zero is a
/// legitimate runtime outcome.
impl<T: Scalar> Div for Interval<T> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        self.checked_div(rhs)
            .expect("interval division by zero-straddling denominator")
    }
}

impl<T: Scalar> fmt::Debug for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl<T: Scalar> fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type I = Interval<f64>;

    #[test]
    fn add_exact_endpoints() {
        let r = I::new(1.0, 2.0) + I::new(3.0, 4.0);
        assert_eq!(r, I::new(4.0, 6.0));
    }

    #[test]
    fn mul_sign_cases() {
        let r = I::new(1.0, 2.0) * I::new(-1.0, 1.0);
        assert_eq!(r, I::new(-2.0, 2.0));
        assert_eq!(I::new(-3.0, -2.0) * I::new(-5.0, 4.0), I::new(-12.0, 15.0));
        assert_eq!(I::zero() * I::entire(), I::zero());
    }

    #[test]
    fn third_has_width_and_contains() {
        let r = I::one() / I::int(3);
        assert!(r.width() > 0.0);
        assert!(r.contains(1.0 / 3.0));
        // one-ulp outward rounding of the decimal
        assert!(r.lo() <= 0.333_333_333_333_333_3 + 1e-16);
        assert!(r.hi() - r.lo() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn setops() {
        let (l, r) = I::new(0.0, 2.0).bisect();
        assert_eq!(l, I::new(0.0, 1.0));
        assert_eq!(r, I::new(1.0, 2.0));
        assert_eq!(I::new(0.0, 1.0).hull(I::new(3.0, 4.0)), I::new(0.0, 4.0));
        assert!(I::new(2.34, 2.35).contains(2.3411172805));
        assert!(I::new(0.0, 1.0).intersect(I::new(2.0, 3.0)).is_none());
        assert_eq!(
            I::new(0.0, 2.0).intersect(I::new(1.0, 3.0)),
            Some(I::new(1.0, 2.0))
        );
    }

    #[test]
    fn powers() {
        assert_eq!(I::new(4.0, 9.0).sqrt().unwrap(), I::new(2.0, 3.0));
        assert_eq!(I::new(-2.0, 1.0).pow_int(2).unwrap(), I::new(0.0, 4.0));
        assert_eq!(I::new(-2.0, 1.0).pow_int(3).unwrap(), I::new(-8.0, 1.0));
        assert!(I::new(-1.0, 2.0).sqrt().is_err());
        let r = I::ratio(1, 3).pow_int(-2).unwrap();
        assert!(r.contains(9.0));
    }

    #[test]
    fn ratio_constants_enclose() {
        assert!(I::ratio(506, 1000).contains(0.506));
        assert!(I::ratio(1, 10).width() > 0.0);
        assert!(I::ratio(1, 4).is_point());
    }

    #[test]
    fn division_by_zero_interval() {
        assert_eq!(
            I::one().checked_div(I::new(-1.0, 1.0)),
            Err(IntervalError::DivisionByZero)
        );
    }
}
