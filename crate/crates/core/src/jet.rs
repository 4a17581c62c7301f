//! Truncated Taylor jets over interval rings.
//!
//! A [`Jet`] holds enclosures of the Taylor coefficients f^(j)(x)/j! of a
//! function at a (possibly interval-valued) point, up to a tracked valid
//! order. Arithmetic is truncated Cauchy-product arithmetic; taking a
//! derivative costs one order. This is how the energy-coefficient ladders
//! obtain derivatives of deeply nested expressions without any hand
//! differentiation.

use std::ops::{Add, Mul, Neg, Sub};

use crate::cinterval::CInterval;
use crate::interval::{Interval, IntervalError};
use crate::scalar::Scalar;

/// Coefficient ring shared by real and complex jets.
pub trait Ring: Copy {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(self, rhs: Self) -> Self;
    fn sub(self, rhs: Self) -> Self;
    fn mul(self, rhs: Self) -> Self;
    fn neg(self) -> Self;
    fn checked_div(self, rhs: Self) -> Result<Self, IntervalError>;
    fn scale_int(self, n: i64) -> Self;
    fn contains_zero(self) -> bool;
}

impl<T: Scalar> Ring for Interval<T> {
    fn zero() -> Self {
        Interval::zero()
    }
    fn one() -> Self {
        Interval::one()
    }
    fn add(self, rhs: Self) -> Self {
        self + rhs
    }
    fn sub(self, rhs: Self) -> Self {
        self - rhs
    }
    fn mul(self, rhs: Self) -> Self {
        self * rhs
    }
    fn neg(self) -> Self {
        -self
    }
    fn checked_div(self, rhs: Self) -> Result<Self, IntervalError> {
        Interval::checked_div(self, rhs)
    }
    fn scale_int(self, n: i64) -> Self {
        self * Interval::int(n)
    }
    fn contains_zero(self) -> bool {
        Interval::contains_zero(self)
    }
}

impl<T: Scalar> Ring for CInterval<T> {
    fn zero() -> Self {
        CInterval::zero()
    }
    fn one() -> Self {
        CInterval::one()
    }
    fn add(self, rhs: Self) -> Self {
        self + rhs
    }
    fn sub(self, rhs: Self) -> Self {
        self - rhs
    }
    fn mul(self, rhs: Self) -> Self {
        self * rhs
    }
    fn neg(self) -> Self {
        -self
    }
    fn checked_div(self, rhs: Self) -> Result<Self, IntervalError> {
        CInterval::checked_div(self, rhs)
    }
    fn scale_int(self, n: i64) -> Self {
        self.scale(Interval::int(n))
    }
    fn contains_zero(self) -> bool {
        CInterval::contains_zero(self)
    }
}

/// First-order dual number over a coefficient ring: value plus directional
/// derivative. Running the series recurrences over `Dual` coefficients
/// propagates variational (Jacobian) information without hand-derived
/// derivative formulas.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<K> {
    pub a: K,
    pub b: K,
}

impl<K: Ring> Dual<K> {
    pub fn value(a: K) -> Self {
        Dual { a, b: K::zero() }
    }

    pub fn seeded(a: K, b: K) -> Self {
        Dual { a, b }
    }
}

impl<K: Ring> Ring for Dual<K> {
    fn zero() -> Self {
        Dual::value(K::zero())
    }
    fn one() -> Self {
        Dual::value(K::one())
    }
    fn add(self, rhs: Self) -> Self {
        Dual {
            a: self.a.add(rhs.a),
            b: self.b.add(rhs.b),
        }
    }
    fn sub(self, rhs: Self) -> Self {
        Dual {
            a: self.a.sub(rhs.a),
            b: self.b.sub(rhs.b),
        }
    }
    fn mul(self, rhs: Self) -> Self {
        Dual {
            a: self.a.mul(rhs.a),
            b: self.a.mul(rhs.b).add(self.b.mul(rhs.a)),
        }
    }
    fn neg(self) -> Self {
        Dual {
            a: self.a.neg(),
            b: self.b.neg(),
        }
    }
    fn checked_div(self, rhs: Self) -> Result<Self, IntervalError> {
        let q = self.a.checked_div(rhs.a)?;
        let db = self.b.sub(q.mul(rhs.b)).checked_div(rhs.a)?;
        Ok(Dual { a: q, b: db })
    }
    fn scale_int(self, n: i64) -> Self {
        Dual {
            a: self.a.scale_int(n),
            b: self.b.scale_int(n),
        }
    }
    fn contains_zero(self) -> bool {
        self.a.contains_zero()
    }
}

/// Maximum jet capacity: order-5 derivatives through four chain levels.
pub const JET_CAP: usize = 10;

#[derive(Clone, Copy, Debug)]
pub struct Jet<K> {
    coeff: [K; JET_CAP],
    /// Number of valid coefficients (valid orders are 0..len).
    len: usize,
}

impl<K: Ring> Jet<K> {
    pub fn constant(value: K, len: usize) -> Self {
        assert!(len >= 1 && len <= JET_CAP);
        let mut coeff = [K::zero(); JET_CAP];
        coeff[0] = value;
        Jet { coeff, len }
    }

    /// Jet of the identity map at the point `x0` (value x0, slope 1).
    pub fn variable(x0: K, len: usize) -> Self {
        assert!(len >= 2 && len <= JET_CAP);
        let mut coeff = [K::zero(); JET_CAP];
        coeff[0] = x0;
        coeff[1] = K::one();
        Jet { coeff, len }
    }

    pub fn from_coeffs(cs: &[K]) -> Self {
        assert!(!cs.is_empty() && cs.len() <= JET_CAP);
        let mut coeff = [K::zero(); JET_CAP];
        coeff[..cs.len()].copy_from_slice(cs);
        Jet {
            coeff,
            len: cs.len(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Value enclosure (order-0 coefficient).
    #[inline]
    pub fn value(&self) -> K {
        self.coeff[0]
    }

    /// Taylor coefficient f^(j)/j!. Panics past the valid order.
    #[inline]
    pub fn coeff(&self, j: usize) -> K {
        assert!(j < self.len, "jet order {j} beyond valid length {}", self.len);
        self.coeff[j]
    }

    /// Enclosure of the j-th derivative (coefficient times j!).
    pub fn deriv_value(&self, j: usize) -> K {
        let mut f = 1i64;
        for i in 2..=j as i64 {
            f *= i;
        }
        self.coeff(j).scale_int(f)
    }

    pub fn truncate(mut self, len: usize) -> Self {
        assert!(len >= 1 && len <= self.len);
        for c in self.coeff.iter_mut().skip(len) {
            *c = K::zero();
        }
        self.len = len;
        self
    }

    /// d/dx: coefficient shift; costs one order.
    pub fn deriv(&self) -> Self {
        assert!(self.len >= 2, "cannot differentiate an order-0 jet");
        let mut coeff = [K::zero(); JET_CAP];
        for j in 1..self.len {
            coeff[j - 1] = self.coeff[j].scale_int(j as i64);
        }
        Jet {
            coeff,
            len: self.len - 1,
        }
    }

    pub fn scale(&self, k: K) -> Self {
        let mut out = *self;
        for c in out.coeff.iter_mut().take(self.len) {
            *c = c.mul(k);
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> Self {
        let mut out = *self;
        for c in out.coeff.iter_mut().take(self.len) {
            *c = c.scale_int(n);
        }
        out
    }

    /// Quotient jet; the divisor's value must exclude zero.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self, IntervalError> {
        let len = self.len.min(rhs.len);
        let inv0 = K::one().checked_div(rhs.coeff[0])?;
        let mut coeff = [K::zero(); JET_CAP];
        for j in 0..len {
            let mut acc = self.coeff[j];
            for i in 0..j {
                acc = acc.sub(coeff[i].mul(rhs.coeff[j - i]));
            }
            coeff[j] = acc.mul(inv0);
        }
        Ok(Jet { coeff, len })
    }

    pub fn recip(&self) -> Result<Self, IntervalError> {
        Jet::constant(K::one(), self.len).checked_div(self)
    }

    /// Divide by the independent variable centred so that the constant term
    /// is known to vanish identically (parity or a proven identity). The
    /// computed constant coefficient must contain zero; it is discarded.
    pub fn deflate(&self) -> Self {
        assert!(self.len >= 2, "cannot deflate an order-0 jet");
        assert!(
            self.coeff[0].contains_zero(),
            "deflation of a jet whose constant term excludes zero"
        );
        let mut coeff = [K::zero(); JET_CAP];
        for j in 1..self.len {
            coeff[j - 1] = self.coeff[j];
        }
        Jet {
            coeff,
            len: self.len - 1,
        }
    }
}

impl<K: Ring> Add for Jet<K> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let len = self.len.min(rhs.len);
        let mut coeff = [K::zero(); JET_CAP];
        for j in 0..len {
            coeff[j] = self.coeff[j].add(rhs.coeff[j]);
        }
        Jet { coeff, len }
    }
}

impl<K: Ring> Sub for Jet<K> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let len = self.len.min(rhs.len);
        let mut coeff = [K::zero(); JET_CAP];
        for j in 0..len {
            coeff[j] = self.coeff[j].sub(rhs.coeff[j]);
        }
        Jet { coeff, len }
    }
}

impl<K: Ring> Mul for Jet<K> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let len = self.len.min(rhs.len);
        let mut coeff = [K::zero(); JET_CAP];
        for j in 0..len {
            let mut acc = K::zero();
            for i in 0..=j {
                acc = acc.add(self.coeff[i].mul(rhs.coeff[j - i]));
            }
            coeff[j] = acc;
        }
        Jet { coeff, len }
    }
}

impl<K: Ring> Neg for Jet<K> {
    type Output = Self;
    fn neg(self) -> Self {
        let mut out = self;
        for c in out.coeff.iter_mut().take(self.len) {
            *c = c.neg();
        }
        out
    }
}
