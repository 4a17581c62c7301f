//! Rigorous exp, log and real powers on intervals.
//!
//! These are the only transcendentals the proof formulas need (magnitudes
//! |1-lambda| and growth factors C^{k-alpha}). Each is computed by argument
//! reduction plus an interval Taylor/atanh series with an explicit remainder
//! enclosure, so soundness never leans on libm accuracy.

use crate::interval::{Interval, IntervalError};
use crate::scalar::Scalar;

impl<T: Scalar> Interval<T> {
    /// Widen both endpoints by one ulp.
    #[inline]
    pub fn widen_1ulp(self) -> Self {
        Interval::new(self.lo().next_down(), self.hi().next_up())
    }
}

/// Enclosure of Euler's number.
pub fn euler_e<T: Scalar>() -> Interval<T> {
    Interval::from_f64(std::f64::consts::E).widen_1ulp()
}

/// Enclosure of ln 2.
pub fn ln_2<T: Scalar>() -> Interval<T> {
    Interval::from_f64(std::f64::consts::LN_2).widen_1ulp()
}

/// exp on an interval (monotone in the endpoints).
pub fn exp<T: Scalar>(x: Interval<T>) -> Interval<T> {
    let lo = exp_point(x.lo());
    let hi = exp_point(x.hi());
    Interval::new(lo.lo(), hi.hi())
}

/// Enclosure of exp at a single scalar.
fn exp_point<T: Scalar>(x: T) -> Interval<T> {
    if x == T::infinity() {
        return Interval::new(T::max_value(), T::infinity());
    }
    if x == T::neg_infinity() {
        return Interval::new(T::zero(), T::min_positive_value());
    }
    // exp overflows past ~709 for f64; the pow_int path below saturates
    // soundly, so only the series argument needs a real reduction.
    let n = x.round();
    let n_i = n.to_i64().unwrap_or(0);
    let r = Interval::point(x) - Interval::int(n_i.clamp(-800, 800));
    let e_n = euler_e::<T>()
        .pow_int(n_i.clamp(-800, 800) as i32)
        .expect("e > 0");
    e_n * exp_series(r)
}

/// Taylor series of exp on |r| <= 0.6 with remainder enclosure.
fn exp_series<T: Scalar>(r: Interval<T>) -> Interval<T> {
    debug_assert!(r.mag() < T::from_f64_nearest(0.75));
    let mut sum = Interval::one();
    let mut term = Interval::one();
    let n_terms = 26i64;
    for k in 1..=n_terms {
        term = term * r / Interval::int(k);
        sum = sum + term;
    }
    // |tail| <= |term_{N+1}| * sum_{j>=0} (0.75)^j = |term_{N+1}| * 4
    let next = (term * r / Interval::int(n_terms + 1)).mag();
    let bound = Interval::new(-next, next) * Interval::int(4);
    sum + bound
}

/// Natural log on an interval with strictly positive lower bound.
pub fn ln<T: Scalar>(x: Interval<T>) -> Result<Interval<T>, IntervalError> {
    if x.lo() <= T::zero() {
        return Err(IntervalError::LogNonPositive);
    }
    let lo = ln_point(x.lo());
    let hi = ln_point(x.hi());
    Ok(Interval::new(lo.lo(), hi.hi()))
}

fn ln_point<T: Scalar>(x: T) -> Interval<T> {
    if x == T::infinity() {
        return Interval::new(T::max_value(), T::infinity());
    }
    // reduce x = m * 2^k with m in [0.75, 1.5]; scaling by 2^k is exact
    let mut k: i32 = x.log2().round().to_i32().unwrap_or(0);
    let mut m = Interval::point(x).scale_pow2(-k);
    for _ in 0..3 {
        if m.hi() > T::from_f64_nearest(1.5) {
            k += 1;
            m = m.scale_pow2(-1);
        } else if m.lo() < T::from_f64_nearest(0.75) {
            k -= 1;
            m = m.scale_pow2(1);
        }
    }
    // ln m = 2 atanh t, t = (m-1)/(m+1), |t| <= 0.21
    let t = (m - Interval::one()) / (m + Interval::one());
    let t2 = t * t;
    let mut sum = Interval::zero();
    let mut pow = t;
    let n_terms = 24i64;
    for j in 0..=n_terms {
        sum = sum + pow / Interval::int(2 * j + 1);
        pow = pow * t2;
    }
    // |tail| = |sum_{j>J} t^{2j+1}/(2j+1)| <= |t|^{2J+3}/((2J+3)(1-t^2))
    let tail_mag = (pow.abs() / (Interval::int(2 * n_terms + 3) * (Interval::one() - t2))).mag();
    let ln_m = Interval::int(2) * (sum + Interval::new(-tail_mag, tail_mag));
    ln_m + Interval::int(k as i64) * ln_2::<T>()
}

/// x^y = exp(y ln x) for x strictly positive.
pub fn pow_general<T: Scalar>(
    x: Interval<T>,
    y: Interval<T>,
) -> Result<Interval<T>, IntervalError> {
    Ok(exp(y * ln(x)?))
}

/// x^(k - alpha) for integer k, the growth-factor shape used throughout the
/// coefficient bounds. Computed as x^k * x^(-alpha) to keep the integer part
/// tight.
pub fn pow_k_minus_alpha<T: Scalar>(
    x: Interval<T>,
    k: i32,
    alpha: Interval<T>,
) -> Result<Interval<T>, IntervalError> {
    let frac = pow_general(x, -alpha)?;
    Ok(x.pow_int(k)? * frac)
}

#[cfg(test)]
mod tests {
    use super::*;

    type I = Interval<f64>;

    #[test]
    fn exp_basics() {
        assert!(exp(I::zero()).contains(1.0));
        assert!(exp(I::one()).contains(std::f64::consts::E));
        let e10 = exp(I::int(10));
        assert!(e10.contains(22026.465794806718));
        assert!(e10.width() / e10.lo() < 1e-13);
        assert!(exp(I::int(-5)).contains((-5.0f64).exp()));
    }

    #[test]
    fn ln_basics() {
        assert!(ln(I::one()).unwrap().contains(0.0));
        assert!(ln(I::int(2)).unwrap().contains(std::f64::consts::LN_2));
        let l = ln(I::ratio(72, 10)).unwrap();
        assert!(l.contains(7.2f64.ln()));
        assert!(l.width() < 1e-14);
        assert!(ln(I::new(-1.0, 1.0)).is_err());
        // round trip
        let x = I::ratio(123, 7);
        assert!(exp(ln(x).unwrap()).contains_interval(x));
    }

    #[test]
    fn pow_general_oracle() {
        // mpmath, 40 digits: 7.2 ** 2.02 = 53.92766829061058419676...
        let r = pow_general(I::ratio(36, 5), I::ratio(101, 50)).unwrap();
        assert!(r.contains(53.927668290610584));
        assert!(r.width() < 1e-11);
    }

    #[test]
    fn growth_factor_shape() {
        // mpmath, 40 digits: 7.2^(200 - 1.98) = 5.874635742812280546...e169
        let r = pow_k_minus_alpha(I::ratio(36, 5), 200, I::ratio(99, 50)).unwrap();
        assert!(r.contains(5.8746357428122805e169));
        assert!(r.width() / r.lo() < 1e-11);
    }
}
