//! Taylor polynomials with interval coefficients and certified truncation
//! tails of the shape |F_k| <= C*^(k-alpha)/k^p, including tail bounds for
//! derivatives up to order 5.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cinterval::CInterval;
use crate::interval::Interval;
use crate::scalar::Scalar;
use crate::series::eval_poly_deriv;
use crate::transcend::{ln, pow_k_minus_alpha};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum TaylorError {
    #[error("geometric tail parameter eps >= 1")]
    TailDiverges,
    #[error("derivative order above 5 unsupported")]
    Unsupported,
    #[error("evaluation point outside the validity radius")]
    OutOfRadius,
    #[error("tail bound does not cover the requested truncation order")]
    TailNotApplicable,
}

/// Certified coefficient growth bound: |F_k| <= C*^(k-alpha)/k^p for k >= n0.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TailBound<T: Scalar> {
    pub c_star: Interval<T>,
    pub alpha: Interval<T>,
    pub p: u8,
    pub n0: usize,
}

impl<T: Scalar> TailBound<T> {
    pub fn new(c_star: Interval<T>, alpha: Interval<T>, p: u8, n0: usize) -> Self {
        assert!(c_star.lo() > T::zero(), "growth base must be positive");
        assert!(matches!(p, 1..=3), "denominator power p must be 1, 2 or 3");
        TailBound {
            c_star,
            alpha,
            p,
            n0,
        }
    }

    /// Absorb a constant prefactor K into alpha: K C^(k-a) = C^(k-a') with
    /// a' = a - ln K / ln C.
    pub fn with_prefactor(self, k: Interval<T>) -> Self {
        let shift = ln(k).expect("prefactor must be positive") / ln(self.c_star).expect("C > 0");
        TailBound {
            alpha: self.alpha - shift,
            ..self
        }
    }

    /// Reindex a bound on even coefficients F_{2j} of an even series in y as
    /// a bound on the coefficients G_j = F_{2j} of the same series in s = y^2.
    /// From C^(2j-a)/(2j)^p = (1/2^p) (C^2)^(j-a') / j^p.
    pub fn to_even_subseries(self) -> Self {
        let two = Interval::int(2);
        let c2 = self.c_star * self.c_star;
        // C^(2j-a)/2^p = (C^2)^j C^(-a)/2^p = (C^2)^(j-a') with
        // a' = (a ln C + p ln 2) / ln C^2
        let ln_c = ln(self.c_star).expect("C > 0");
        let ln_2 = ln(two).unwrap();
        let p_iv = Interval::int(self.p as i64);
        let alpha2 = (self.alpha * ln_c + p_iv * ln_2) / (two * ln_c);
        TailBound {
            c_star: c2,
            alpha: alpha2,
            p: self.p,
            n0: self.n0.div_ceil(2).max(1),
        }
    }
}

/// Enclosure of sum_{k=n-m}^inf (k+m)...(k+1) r^k = d^m/dr^m ( r^n/(1-r) ),
/// the identity every truncation bound reduces to.
pub fn powersum<T: Scalar>(
    m: usize,
    n: usize,
    r: Interval<T>,
) -> Result<Interval<T>, TaylorError> {
    if m > 5 {
        return Err(TaylorError::Unsupported);
    }
    if r.abs().hi() >= T::one() {
        return Err(TaylorError::TailDiverges);
    }
    let one_minus = Interval::one() - r;
    let mut acc = Interval::zero();
    for i in 0..=m.min(n) {
        // C(m,i) * n!/(n-i)! * r^(n-i) * (m-i)! / (1-r)^(m-i+1)
        let mut binom = 1i64;
        for j in 0..i {
            binom = binom * (m - j) as i64 / (j + 1) as i64;
        }
        let mut falling = 1i64;
        for j in 0..i {
            falling *= (n - j) as i64;
        }
        let mut fact = 1i64;
        for j in 2..=(m - i) as i64 {
            fact *= j;
        }
        let num = Interval::int(binom * falling * fact) * r.pow_int((n - i) as i32).unwrap();
        let den = one_minus.pow_int((m - i + 1) as i32).unwrap();
        acc = acc + num / den;
    }
    Ok(acc)
}

/// Bound on |d^order (F - F_N)| over |x - x0| <= eps / C*, where F_N is the
/// N-term truncation. Returns [0, bound]. Uses the closed p = 2 formulas;
/// p = 1 goes through `powersum` directly, and p = 3 reuses the p = 2 bound
/// with the extra factor 1/(N+1) from k^3 >= k^2 (N+1) on the tail.
pub fn tail_eval<T: Scalar>(
    tb: &TailBound<T>,
    n: usize,
    eps: Interval<T>,
    order: usize,
) -> Result<Interval<T>, TaylorError> {
    if order > 5 {
        return Err(TaylorError::Unsupported);
    }
    if eps.hi() >= T::one() || eps.lo() < T::zero() {
        return Err(TaylorError::TailDiverges);
    }
    if n + 1 < tb.n0 || n < order + 4 {
        return Err(TaylorError::TailNotApplicable);
    }
    if eps.hi() == T::zero() {
        return Ok(Interval::zero());
    }
    let bound = match tb.p {
        2 => p2_bound(tb, n, eps, order)?,
        1 => p1_bound(tb, n, eps, order)?,
        3 => {
            let b2 = p2_bound(tb, n, eps, order)?;
            b2 / Interval::int((n + 1) as i64)
        }
        _ => unreachable!(),
    };
    Ok(Interval::new(T::zero(), bound.hi().max(T::zero())))
}

fn cpow<T: Scalar>(tb: &TailBound<T>, m: i32) -> Result<Interval<T>, TaylorError> {
    pow_k_minus_alpha(tb.c_star, m, tb.alpha).map_err(|_| TaylorError::TailDiverges)
}

fn p2_bound<T: Scalar>(
    tb: &TailBound<T>,
    n: usize,
    eps: Interval<T>,
    order: usize,
) -> Result<Interval<T>, TaylorError> {
    let ni = Interval::int(n as i64);
    let one = Interval::one();
    let om = one - eps;
    let epow = |k: usize| eps.pow_int(k as i32).unwrap();
    Ok(match order {
        0 => {
            cpow(tb, 0)? / Interval::int(((n + 1) * (n + 1)) as i64) * epow(n + 1)
                / om
        }
        1 => cpow(tb, 1)? / Interval::int((n + 1) as i64) * epow(n) / om,
        2 => cpow(tb, 2)? * epow(n - 1) / om,
        3 => {
            let pre = ni * om + Interval::int(2) * eps - one;
            cpow(tb, 3)? * epow(n - 2) / (om * om) * pre
        }
        4 => {
            let five_eps = Interval::int(5) * eps;
            let pre = ni * ni * om * om - ni * (five_eps - Interval::int(3)) * (eps - one)
                + Interval::int(6) * eps * eps - Interval::int(6) * eps + Interval::int(2);
            cpow(tb, 4)? * epow(n - 3) / (om * om * om) * pre
        }
        5 => {
            let e2 = eps * eps;
            let pre = ni * ni * ni * om.pow_int(3).unwrap()
                + Interval::int(3) * ni * ni * om * om * (Interval::int(3) * eps - Interval::int(2))
                + ni * om
                    * (Interval::int(26) * e2 - Interval::int(31) * eps + Interval::int(11))
                + Interval::int(6)
                    * (Interval::int(2) * eps - one)
                    * (Interval::int(2) * e2 - Interval::int(2) * eps + one);
            cpow(tb, 5)? * epow(n - 4) / om.pow_int(4).unwrap() * pre
        }
        _ => return Err(TaylorError::Unsupported),
    })
}

fn p1_bound<T: Scalar>(
    tb: &TailBound<T>,
    n: usize,
    eps: Interval<T>,
    order: usize,
) -> Result<Interval<T>, TaylorError> {
    if order == 0 {
        let epow = eps.pow_int((n + 1) as i32).unwrap();
        return Ok(cpow(tb, 0)? * epow / (Interval::int((n + 1) as i64) * (Interval::one() - eps)));
    }
    // k...(k-order+1)/k <= (k-1)...(k-order+1); shift j = k - order gives
    // powersum of order-1 derivatives of eps^n/(1-eps).
    let ps = powersum(order - 1, n, eps)?;
    Ok(cpow(tb, order as i32)? * ps)
}

/// Finite interval Taylor polynomial about `center` with a certified tail.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TaylorModel<T: Scalar> {
    pub center: Interval<T>,
    pub coeffs: Vec<CInterval<T>>,
    pub tail: TailBound<T>,
    pub radius: Interval<T>,
}

impl<T: Scalar> TaylorModel<T> {
    pub fn new(
        center: Interval<T>,
        coeffs: Vec<CInterval<T>>,
        tail: TailBound<T>,
        radius: Interval<T>,
    ) -> Self {
        let eps = tail.c_star * radius;
        assert!(
            eps.hi() < T::one(),
            "validity radius times growth base must stay below 1"
        );
        TaylorModel {
            center,
            coeffs,
            tail,
            radius,
        }
    }

    /// Real-series convenience constructor.
    pub fn from_real(
        center: Interval<T>,
        coeffs: &[Interval<T>],
        tail: TailBound<T>,
        radius: Interval<T>,
    ) -> Self {
        Self::new(
            center,
            coeffs.iter().map(|&c| CInterval::from_real(c)).collect(),
            tail,
            radius,
        )
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Enclosure of the `order`-th derivative of the represented function at
    /// `x`: interval Horner on the differentiated polynomial, widened by the
    /// certified truncation tail.
    pub fn eval_with_tail(
        &self,
        x: Interval<T>,
        order: usize,
    ) -> Result<CInterval<T>, TaylorError> {
        let dx = x - self.center;
        if dx.abs().hi() > self.radius.hi() {
            return Err(TaylorError::OutOfRadius);
        }
        let poly = eval_poly_deriv(&self.coeffs, dx, order);
        let eps = self.tail.c_star * dx.abs();
        let eps = Interval::new(T::zero(), eps.hi());
        let bound = tail_eval(&self.tail, self.degree(), eps, order)?;
        let pad = Interval::new(-bound.hi(), bound.hi());
        Ok(CInterval::new(poly.re + pad, poly.im + pad))
    }

    /// Same, for models known to be real (imaginary parts are all zero).
    pub fn eval_real(&self, x: Interval<T>, order: usize) -> Result<Interval<T>, TaylorError> {
        Ok(self.eval_with_tail(x, order)?.re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transcend::pow_general;

    type I = Interval<f64>;

    fn lp_tail() -> TailBound<f64> {
        TailBound::new(I::ratio(36, 5), I::ratio(99, 50), 2, 2)
    }

    #[test]
    fn powersum_oracles() {
        // m=0, n=0, r=1/2: geometric series = 2
        assert!(powersum(0, 0, I::ratio(1, 2)).unwrap().contains(2.0));
        // m=1, n=1, r=1/2: d/dr (r/(1-r)) = 1/(1-r)^2 = 4
        assert!(powersum(1, 1, I::ratio(1, 2)).unwrap().contains(4.0));
        // m=0, n=3, r=0.1: 0.001/0.9
        assert!(powersum(0, 3, I::ratio(1, 10))
            .unwrap()
            .contains(0.001 / 0.9));
    }

    #[test]
    fn zero_radius_tail_is_zero() {
        let tb = lp_tail();
        for order in 0..=5 {
            let t = tail_eval(&tb, 200, I::zero(), order).unwrap();
            assert_eq!(t, I::zero(), "order {order}");
        }
    }

    #[test]
    fn order0_tail_oracle() {
        // mpmath: C=7.2, alpha=1.98, N=200, eps=0.576 ->
        // 8.19677197553913842e-55, comfortably below 1e-30.
        let tb = lp_tail();
        let eps = I::ratio(36, 5) * I::ratio(2, 25); // 7.2 * 0.08
        let t = tail_eval(&tb, 200, eps, 0).unwrap();
        assert!(t.hi() < 1e-30);
        assert!(t.hi() > 8.1e-55 && t.hi() < 8.3e-55);
    }

    #[test]
    fn order5_matches_powersum_route() {
        // The displayed order-5 prefactor polynomial must agree with the
        // third derivative of eps^(N-1)/(1-eps), computed independently.
        let tb = lp_tail();
        for &(n, eps_num) in &[(60usize, 3i64), (200, 5), (31, 1)] {
            let eps = I::ratio(eps_num, 10);
            let closed = tail_eval(&tb, n, eps, 5).unwrap();
            let ps = powersum(3, n - 1, eps).unwrap();
            let via_ps = pow_k_minus_alpha(tb.c_star, 5, tb.alpha).unwrap() * ps;
            // identical mathematical content: enclosures must overlap and be
            // within a relative whisker of each other
            assert!(closed.intersect(Interval::new(0.0, via_ps.hi())).is_some());
            let rel = (closed.hi() - via_ps.hi()).abs() / via_ps.hi();
            assert!(rel < 1e-12, "n={n} rel={rel}");
        }
    }

    #[test]
    fn tail_domination_by_partial_sums() {
        // sum_{k=N+1}^{N+500} sup|F_k| eps^k <= tail_eval(order 0)
        for &(c_num, c_den, a_num, a_den, p) in &[
            (36i64, 5i64, 99i64, 50i64, 2u8),
            (33, 4, 39, 20, 2),
            (2, 1, 39, 20, 1),
            (8, 1, 1, 1, 3),
        ] {
            let c = I::ratio(c_num, c_den);
            let alpha = I::ratio(a_num, a_den);
            let tb = TailBound::new(c, alpha, p, 2);
            for &n in &[12usize, 40, 120] {
                for &e10 in &[1i64, 3, 6, 9] {
                    let eps = I::ratio(e10, 10);
                    let bound = tail_eval(&tb, n, eps, 0).unwrap();
                    let mut partial = I::zero();
                    for k in (n + 1)..(n + 500) {
                        let fk = pow_k_minus_alpha(c, 0, alpha).unwrap()
                            / I::int((k as i64).pow(p as u32))
                            * eps.pow_int(k as i32).unwrap();
                        partial = partial + fk;
                    }
                    assert!(
                        partial.hi() <= bound.hi() * (1.0 + 1e-9),
                        "p={p} n={n} eps=0.{e10}: {partial:?} vs {bound:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn monotone_in_truncation_order() {
        let tb = lp_tail();
        let eps = I::ratio(1, 2);
        let mut prev = f64::INFINITY;
        for n in [20usize, 40, 80, 160] {
            let t = tail_eval(&tb, n, eps, 0).unwrap().hi();
            assert!(t < prev);
            prev = t;
        }
    }

    #[test]
    fn model_eval_at_center_is_coeff0() {
        let tb = lp_tail();
        let coeffs = vec![I::ratio(1, 3), I::ratio(-1, 7), I::ratio(1, 11)];
        let coeffs: Vec<_> = (0..=200)
            .map(|k| {
                if k < 3 {
                    coeffs[k]
                } else {
                    I::zero()
                }
            })
            .collect();
        let m = TaylorModel::from_real(I::one(), &coeffs, tb, I::ratio(2, 25));
        let v = m.eval_real(I::one(), 0).unwrap();
        // at the center eps = 0 so the tail vanishes and we get coeff 0 back
        assert_eq!(v, I::ratio(1, 3));
    }

    #[test]
    fn derivative_consistency_fd() {
        // order-1 evaluation agrees with a centred difference of order-0
        let tb = lp_tail();
        // use a smooth test series 1/(1-u/8): coefficients 8^-k
        let eighth = I::ratio(1, 8);
        let coeffs: Vec<_> = (0..=200i32).map(|k| eighth.pow_int(k).unwrap()).collect();
        let m = TaylorModel::from_real(I::zero(), &coeffs, tb, I::ratio(2, 25));
        let x = I::ratio(1, 20);
        let h = 1e-6;
        let d1 = m.eval_real(x, 1).unwrap();
        let fp = m.eval_real(x + I::from_f64(h), 0).unwrap();
        let fm = m.eval_real(x - I::from_f64(h), 0).unwrap();
        let fd = (fp - fm) / I::from_f64(2.0 * h);
        assert!(d1.intersect(fd.widen_1ulp()).is_some() || (d1.mid() - fd.mid()).abs() < 1e-5);
    }
}
