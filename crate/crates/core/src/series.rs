//! Coefficient-vector helpers for the Taylor recurrences: Cauchy products,
//! convolution slices with index constraints, derivatives and polynomial
//! evaluation. These operate on plain `Vec`s of interval coefficients; the
//! certified-tail wrapper lives in [`crate::taylor`].

use crate::cinterval::CInterval;
use crate::interval::Interval;
use crate::jet::Ring;
use crate::scalar::Scalar;

/// Full Cauchy product coefficient: sum_{i+j=k} a_i b_j.
pub fn conv<K: Ring>(a: &[K], b: &[K], k: usize) -> K {
    let mut acc = K::zero();
    for i in 0..=k {
        if i < a.len() && k - i < b.len() {
            acc = acc.add(a[i].mul(b[k - i]));
        }
    }
    acc
}

/// Convolution with the first index restricted to `lo..=hi`.
pub fn conv_range<K: Ring>(a: &[K], b: &[K], k: usize, lo: usize, hi: usize) -> K {
    let mut acc = K::zero();
    for i in lo..=hi.min(k) {
        if i < a.len() && k - i < b.len() {
            acc = acc.add(a[i].mul(b[k - i]));
        }
    }
    acc
}

/// Product series of `a` and `b` up to `n` coefficients.
pub fn mul_series<K: Ring>(a: &[K], b: &[K], n: usize) -> Vec<K> {
    (0..n).map(|k| conv(a, b, k)).collect()
}

/// Derivative series (coefficient shift).
pub fn deriv_series<K: Ring>(a: &[K]) -> Vec<K> {
    if a.len() <= 1 {
        return vec![K::zero()];
    }
    (1..a.len()).map(|k| a[k].scale_int(k as i64)).collect()
}

/// Series of 1/b given b with invertible constant coefficient.
pub fn recip_series<K: Ring>(b: &[K], n: usize) -> Vec<K> {
    let inv0 = K::one()
        .checked_div(b[0])
        .expect("recip_series: constant term straddles zero");
    let mut out = Vec::with_capacity(n);
    out.push(inv0);
    for k in 1..n {
        let mut acc = K::zero();
        for j in 1..=k {
            if j < b.len() {
                acc = acc.add(b[j].mul(out[k - j]));
            }
        }
        out.push(acc.neg().mul(inv0));
    }
    out
}

/// Evaluate the polynomial with coefficients `a` at `x` by Horner.
pub fn eval_poly<T: Scalar>(a: &[CInterval<T>], x: Interval<T>) -> CInterval<T> {
    let mut acc = CInterval::zero();
    for &c in a.iter().rev() {
        acc = acc.scale(x) + c;
    }
    acc
}

/// Evaluate the m-th derivative of the polynomial at `x`.
pub fn eval_poly_deriv<T: Scalar>(
    a: &[CInterval<T>],
    x: Interval<T>,
    m: usize,
) -> CInterval<T> {
    let mut acc = CInterval::zero();
    for k in (m..a.len()).rev() {
        // falling factorial k (k-1) ... (k-m+1)
        let mut f = 1i64;
        for i in 0..m {
            f *= (k - i) as i64;
        }
        acc = acc.scale(x) + a[k].scale(Interval::int(f));
    }
    acc
}

/// Real slice view helpers for real-coefficient series.
pub fn eval_poly_real<T: Scalar>(a: &[Interval<T>], x: Interval<T>) -> Interval<T> {
    let mut acc = Interval::zero();
    for &c in a.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn eval_poly_deriv_real<T: Scalar>(
    a: &[Interval<T>],
    x: Interval<T>,
    m: usize,
) -> Interval<T> {
    let mut acc = Interval::zero();
    for k in (m..a.len()).rev() {
        let mut f = 1i64;
        for i in 0..m {
            f *= (k - i) as i64;
        }
        acc = acc * x + a[k] * Interval::int(f);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    type I = Interval<f64>;

    #[test]
    fn product_and_recip() {
        // (1+x)^2 = 1 + 2x + x^2
        let a = vec![I::one(), I::one()];
        let p = mul_series(&a, &a, 3);
        assert!(p[0].contains(1.0) && p[1].contains(2.0) && p[2].contains(1.0));
        // 1/(1+x) = 1 - x + x^2 - ...
        let r = recip_series(&a, 4);
        for (k, c) in r.iter().enumerate() {
            assert!(c.contains(if k % 2 == 0 { 1.0 } else { -1.0 }));
        }
    }

    #[test]
    fn poly_deriv_eval() {
        // p = x^3: p''(2) = 12
        let p = vec![I::zero(), I::zero(), I::zero(), I::one()];
        let v = eval_poly_deriv_real(&p, I::int(2), 2);
        assert!(v.contains(12.0));
    }
}
