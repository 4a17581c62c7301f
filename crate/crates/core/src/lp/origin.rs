//! Taylor expansion of the profile about the origin.
//!
//! Both components are even in y, so only even coefficients appear:
//! rho = sum rho_{2j} y^{2j}, om = sum om_{2j} y^{2j} with om_0 = 1/3
//! exactly and rho_0 = rho(0) the free parameter. Writing N + 1 = 2n, the
//! recurrence reads
//!
//!   rho_{N+1} = F_{N+1} / (N+1),   om_{N+1} = G_{N+1} / (N+4),
//!
//! with source terms built from the quadratic coefficient tables.

use crate::interval::Interval;
use crate::scalar::Scalar;
use crate::series::conv;

use super::LpError;

/// Even-index coefficients only; `rho[j]` is the coefficient of y^{2j}.
#[derive(Debug, Clone)]
pub struct OriginSeries<T: Scalar> {
    pub rho0: Interval<T>,
    pub rho: Vec<Interval<T>>,
    pub omega: Vec<Interval<T>>,
    /// (om^2)_{2j} table, indexed by j.
    pub om2: Vec<Interval<T>>,
    /// (rho om)_{2j} table, indexed by j.
    pub rhom: Vec<Interval<T>>,
}

impl<T: Scalar> OriginSeries<T> {
    /// Number of stored even coefficients (max power is y^{2(len-1)}).
    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }
}

/// Build the origin series for rho(0) in the supported bracket. `n_even`
/// is the number of even coefficients to produce beyond order zero.
pub fn origin_coeffs<T: Scalar>(
    rho0: Interval<T>,
    n_even: usize,
) -> Result<OriginSeries<T>, LpError> {
    if rho0.lo() < T::from_f64_nearest(0.5) || rho0.hi() > T::from_f64_nearest(0.95) {
        return Err(LpError::Rho0Range);
    }
    let third = Interval::ratio(1, 3);
    let mut s = OriginSeries {
        rho0,
        rho: vec![rho0],
        omega: vec![third],
        om2: vec![third * third],
        rhom: vec![rho0 * third],
    };
    for n_idx in 1..=n_even {
        // producing the coefficient of y^{2 n_idx}; N + 1 = 2 n_idx
        let (r, o) = next_even_coeff(&s, n_idx)?;
        s.rho.push(r);
        s.omega.push(o);
        s.om2.push(conv(&s.omega, &s.omega, n_idx));
        s.rhom.push(conv(&s.rho, &s.omega, n_idx));
    }
    Ok(s)
}

fn next_even_coeff<T: Scalar>(
    s: &OriginSeries<T>,
    n_idx: usize,
) -> Result<(Interval<T>, Interval<T>), LpError> {
    // N + 1 = 2 n_idx, so N - 1 = 2(n_idx - 1)
    let n_plus_1 = 2 * n_idx;
    let rho = &s.rho;
    let om = &s.omega;

    // F = sum_{i+j = n_idx - 1} 2i rho_{2i} (om^2)_{2j} - 2 (om rho (rho - om))_{2(n_idx-1)}
    let mut f = Interval::zero();
    for i in 0..n_idx {
        let j = n_idx - 1 - i;
        f = f + Interval::int(2 * i as i64) * rho[i] * s.om2[j];
    }
    // (om rho (rho - om))_{2(n-1)} = sum_m (rho - om)_{2m} (rho om)_{2(n-1-m)}
    let mut cubic_f = Interval::zero();
    for m in 0..n_idx {
        cubic_f = cubic_f + (rho[m] - om[m]) * s.rhom[n_idx - 1 - m];
    }
    f = f - Interval::int(2) * cubic_f;

    // G = sum_{i+j=n-1} 2i om_{2i} (om^2)_{2j} + 3 sum_{i+j=n-1, i != 0} om_{2i} (om^2)_{2j}
    //     + 2 (om^2 (rho - om))_{2(n-1)}
    let mut g = Interval::zero();
    for i in 0..n_idx {
        let j = n_idx - 1 - i;
        g = g + Interval::int(2 * i as i64) * om[i] * s.om2[j];
        if i != 0 {
            g = g + Interval::int(3) * om[i] * s.om2[j];
        }
    }
    let mut cubic_g = Interval::zero();
    for m in 0..n_idx {
        cubic_g = cubic_g + (rho[m] - om[m]) * s.om2[n_idx - 1 - m];
    }
    g = g + Interval::int(2) * cubic_g;

    let rho_next = f / Interval::int(n_plus_1 as i64);
    let om_next = g / Interval::int((n_plus_1 + 3) as i64);
    Ok((rho_next, om_next))
}
