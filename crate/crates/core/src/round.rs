//! Directed-rounded scalar operations built from round-to-nearest hardware
//! arithmetic plus next-float stepping.
//!
//! Each operation computes the nominal round-to-nearest result and an exact
//! residue (TwoSum for addition, an FMA residual for multiplication, division
//! and square root). The residue decides whether the nominal result already
//! bounds the exact value from the requested side; only if it does not do we
//! step one ulp outward. Exactly representable results therefore stay exact,
//! and everything else costs at most one ulp of width per endpoint.
//!
//! Near the subnormal range the residues themselves can round; there we step
//! unconditionally, which is sound because round-to-nearest is still within
//! half an ulp of the exact value.

use crate::scalar::Scalar;

/// Magnitudes below this (relative to the type) lose residue exactness.
#[inline]
fn subnormal_guard<T: Scalar>() -> T {
    // min_positive (smallest normal) / epsilon^2 leaves ample headroom for
    // the product residue to stay representable.
    T::min_positive_value() / (T::epsilon() * T::epsilon())
}

/// Lower bound for `a + b`.
#[inline]
pub fn add_lo<T: Scalar>(a: T, b: T) -> T {
    let s = a + b;
    if !s.is_finite() {
        return if s > T::zero() { T::max_value() } else { s };
    }
    // Knuth TwoSum: err is the exact rounding error of s.
    let bv = s - a;
    let av = s - bv;
    let err = (a - av) + (b - bv);
    if err.is_nan() || err < T::zero() {
        s.next_down()
    } else {
        s
    }
}

/// Upper bound for `a + b`.
#[inline]
pub fn add_hi<T: Scalar>(a: T, b: T) -> T {
    let s = a + b;
    if !s.is_finite() {
        return if s < T::zero() { -T::max_value() } else { s };
    }
    let bv = s - a;
    let av = s - bv;
    let err = (a - av) + (b - bv);
    if err.is_nan() || err > T::zero() {
        s.next_up()
    } else {
        s
    }
}

#[inline]
pub fn sub_lo<T: Scalar>(a: T, b: T) -> T {
    add_lo(a, -b)
}

#[inline]
pub fn sub_hi<T: Scalar>(a: T, b: T) -> T {
    add_hi(a, -b)
}

/// Residue sign of `a * b - p` via FMA, or `None` when it cannot be trusted.
#[inline]
fn mul_residue<T: Scalar>(a: T, b: T, p: T) -> Option<T> {
    if !p.is_finite() || p.abs() < subnormal_guard::<T>() {
        return None;
    }
    let err = a.mul_add(b, -p);
    if err.is_nan() {
        None
    } else {
        Some(err)
    }
}

/// Lower bound for `a * b`.
#[inline]
pub fn mul_lo<T: Scalar>(a: T, b: T) -> T {
    if a == T::zero() || b == T::zero() {
        return T::zero();
    }
    let p = a * b;
    if p.is_infinite() {
        return if p > T::zero() { T::max_value() } else { p };
    }
    match mul_residue(a, b, p) {
        Some(err) if err >= T::zero() => p,
        _ => p.next_down(),
    }
}

/// Upper bound for `a * b`.
#[inline]
pub fn mul_hi<T: Scalar>(a: T, b: T) -> T {
    if a == T::zero() || b == T::zero() {
        return T::zero();
    }
    let p = a * b;
    if p.is_infinite() {
        return if p < T::zero() { -T::max_value() } else { p };
    }
    match mul_residue(a, b, p) {
        Some(err) if err <= T::zero() => p,
        _ => p.next_up(),
    }
}

/// Lower bound for `a / b` (caller guarantees `b != 0`).
#[inline]
pub fn div_lo<T: Scalar>(a: T, b: T) -> T {
    if a == T::zero() {
        return T::zero();
    }
    let q = a / b;
    if q.is_infinite() {
        return if q > T::zero() { T::max_value() } else { q };
    }
    // a = q*b + r exactly, so the true quotient is q + r/b.
    match mul_residue(q, b, a).map(|minus_r| -minus_r) {
        Some(r) => {
            let true_above = (r > T::zero()) == (b > T::zero());
            if r == T::zero() || true_above {
                q
            } else {
                q.next_down()
            }
        }
        None => q.next_down(),
    }
}

/// Upper bound for `a / b` (caller guarantees `b != 0`).
#[inline]
pub fn div_hi<T: Scalar>(a: T, b: T) -> T {
    if a == T::zero() {
        return T::zero();
    }
    let q = a / b;
    if q.is_infinite() {
        return if q < T::zero() { -T::max_value() } else { q };
    }
    match mul_residue(q, b, a).map(|minus_r| -minus_r) {
        Some(r) => {
            let true_below = (r > T::zero()) != (b > T::zero());
            if r == T::zero() || true_below {
                q
            } else {
                q.next_up()
            }
        }
        None => q.next_up(),
    }
}

/// Lower bound for `sqrt(a)` (caller guarantees `a >= 0`).
#[inline]
pub fn sqrt_lo<T: Scalar>(a: T) -> T {
    if a == T::zero() {
        return T::zero();
    }
    let s = a.sqrt();
    if !s.is_finite() {
        return s;
    }
    match mul_residue(s, s, a).map(|minus_r| -minus_r) {
        // r = a - s*s; r < 0 means s*s > a, i.e. s overshoots.
        Some(r) if r >= T::zero() => s,
        _ => s.next_down().max(T::zero()),
    }
}

/// Upper bound for `sqrt(a)` (caller guarantees `a >= 0`).
#[inline]
pub fn sqrt_hi<T: Scalar>(a: T) -> T {
    if a == T::zero() {
        return T::zero();
    }
    let s = a.sqrt();
    if !s.is_finite() {
        return s;
    }
    match mul_residue(s, s, a).map(|minus_r| -minus_r) {
        Some(r) if r <= T::zero() => s,
        _ => s.next_up(),
    }
}
