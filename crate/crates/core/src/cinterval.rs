//! Rectangular complex interval arithmetic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::interval::{Interval, IntervalError};
use crate::scalar::Scalar;

/// Axis-aligned rectangle `re + i im` enclosing a set of complex numbers.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CInterval<T> {
    pub re: Interval<T>,
    pub im: Interval<T>,
}

impl<T: Scalar> CInterval<T> {
    #[inline]
    pub fn new(re: Interval<T>, im: Interval<T>) -> Self {
        CInterval { re, im }
    }

    #[inline]
    pub fn from_real(re: Interval<T>) -> Self {
        CInterval {
            re,
            im: Interval::zero(),
        }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::from_real(Interval::zero())
    }

    #[inline]
    pub fn one() -> Self {
        Self::from_real(Interval::one())
    }

    #[inline]
    pub fn i() -> Self {
        CInterval {
            re: Interval::zero(),
            im: Interval::one(),
        }
    }

    #[inline]
    pub fn point(re: T, im: T) -> Self {
        CInterval {
            re: Interval::point(re),
            im: Interval::point(im),
        }
    }

    #[inline]
    pub fn conj(self) -> Self {
        CInterval {
            re: self.re,
            im: -self.im,
        }
    }

    /// Enclosure of |z|^2.
    #[inline]
    pub fn mag2(self) -> Interval<T> {
        // even powers handle straddling components exactly
        self.re.pow_int(2).unwrap() + self.im.pow_int(2).unwrap()
    }

    /// Enclosure of |z|.
    #[inline]
    pub fn mag(self) -> Interval<T> {
        self.mag2().sqrt().expect("mag2 is nonnegative")
    }

    /// sup |z| over the rectangle.
    #[inline]
    pub fn mag_hi(self) -> T {
        self.mag().hi()
    }

    #[inline]
    pub fn scale(self, r: Interval<T>) -> Self {
        CInterval {
            re: self.re * r,
            im: self.im * r,
        }
    }

    #[inline]
    pub fn contains(self, re: T, im: T) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    #[inline]
    pub fn contains_interval(self, other: Self) -> bool {
        self.re.contains_interval(other.re) && self.im.contains_interval(other.im)
    }

    #[inline]
    pub fn contains_zero(self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    #[inline]
    pub fn hull(self, other: Self) -> Self {
        CInterval {
            re: self.re.hull(other.re),
            im: self.im.hull(other.im),
        }
    }

    #[inline]
    pub fn intersect(self, other: Self) -> Option<Self> {
        Some(CInterval {
            re: self.re.intersect(other.re)?,
            im: self.im.intersect(other.im)?,
        })
    }

    #[inline]
    pub fn width(self) -> T {
        self.re.width().max(self.im.width())
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// z / w; errors when |w|^2 straddles zero.
    pub fn checked_div(self, rhs: Self) -> Result<Self, IntervalError> {
        let m2 = rhs.mag2();
        if m2.contains_zero() {
            return Err(IntervalError::DivisionByZero);
        }
        let num = self * rhs.conj();
        Ok(CInterval {
            re: num.re / m2,
            im: num.im / m2,
        })
    }

    pub fn recip(self) -> Result<Self, IntervalError> {
        Self::one().checked_div(self)
    }

    pub fn pow_int(self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut b = self;
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
        acc
    }
}

impl<T: Scalar> Neg for CInterval<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        CInterval {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl<T: Scalar> Add for CInterval<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        CInterval {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl<T: Scalar> Sub for CInterval<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        CInterval {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl<T: Scalar> Mul for CInterval<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        CInterval {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl<T: Scalar> fmt::Debug for CInterval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + i {:?})", self.re, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = CInterval<f64>;
    type I = Interval<f64>;

    #[test]
    fn unit_rotation() {
        let r = C::one() * C::i();
        assert!(r.contains(0.0, 1.0));
    }

    #[test]
    fn self_division_contains_one() {
        let z = C::point(3.0, 4.0);
        let r = z.checked_div(z).unwrap();
        assert!(r.contains(1.0, 0.0));
        assert!(r.width() < 1e-14);
    }

    #[test]
    fn exact_product() {
        // (1+2i)(3+4i) = -5 + 10i
        let r = C::point(1.0, 2.0) * C::point(3.0, 4.0);
        assert!(r.contains(-5.0, 10.0));
        assert_eq!(r.re, I::point(-5.0));
        assert_eq!(r.im, I::point(10.0));
    }

    #[test]
    fn mag2_encloses_modulus_squared() {
        let z = C::point(3.0, 4.0);
        assert!(z.mag2().contains(25.0));
        assert!(z.mag().contains(5.0));
        let w = C::new(I::new(-1.0, 1.0), I::new(-1.0, 1.0));
        assert!(w.mag2().contains(0.0) && w.mag2().contains(2.0));
    }

    #[test]
    fn division_by_straddling_rectangle() {
        let w = C::new(I::new(-1.0, 1.0), I::new(-1.0, 1.0));
        assert!(C::one().checked_div(w).is_err());
    }
}
