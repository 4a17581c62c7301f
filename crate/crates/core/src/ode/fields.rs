//! The two vector fields, as truncated-series generators over a generic
//! coefficient ring.
//!
//! Solution Taylor coefficients are produced order by order: given state
//! series known through order j, the RHS series through order j determines
//! the state coefficients at order j+1. Derivative quantities inside the
//! eigenfunction coefficients (w', rho', v') are substituted through the
//! profile ODE itself, so only state values are ever needed. Running the
//! same code over `Dual` coefficients yields the variational flow.

use crate::cinterval::CInterval;
use crate::interval::Interval;
use crate::jet::Ring;
use crate::scalar::Scalar;
use crate::series::{mul_series, recip_series};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldId {
    /// (rho, om) profile system in y.
    LpSystem,
    /// (rho, om, psi, psi') with the second-order eigenfunction equation in y.
    EfunOde,
}

#[derive(Debug, Clone)]
pub struct FieldParams<T: Scalar> {
    /// 1 - lambda = a + i b (eigenfunction field only).
    pub one_minus_lambda: Option<CInterval<T>>,
}

impl<T: Scalar> FieldParams<T> {
    pub fn none() -> Self {
        FieldParams {
            one_minus_lambda: None,
        }
    }

    pub fn lambda(one_minus_lambda: CInterval<T>) -> Self {
        FieldParams {
            one_minus_lambda: Some(one_minus_lambda),
        }
    }
}

pub fn dim(field: FieldId) -> usize {
    match field {
        FieldId::LpSystem => 2,
        FieldId::EfunOde => 4,
    }
}

fn scale_k<K: Ring>(s: &[K], k: K) -> Vec<K> {
    s.iter().map(|c| c.mul(k)).collect()
}

fn scale_i<K: Ring>(s: &[K], n: i64) -> Vec<K> {
    s.iter().map(|c| c.scale_int(n)).collect()
}

fn add<K: Ring>(a: &[K], b: &[K]) -> Vec<K> {
    (0..a.len().min(b.len())).map(|k| a[k].add(b[k])).collect()
}

fn sub<K: Ring>(a: &[K], b: &[K]) -> Vec<K> {
    (0..a.len().min(b.len())).map(|k| a[k].sub(b[k])).collect()
}

/// LP right-hand side as series through order `n-1`, given state series.
/// Returns (rho', om', w, 1/w); `None` when a zero cannot be excluded from a
/// denominator.
#[allow(clippy::type_complexity)]
fn lp_rhs_series<K: Ring>(
    t: &[K],
    rho: &[K],
    om: &[K],
    n: usize,
) -> Option<(Vec<K>, Vec<K>, Vec<K>, Vec<K>)> {
    let t2 = mul_series(t, t, n);
    let om2 = mul_series(om, om, n);
    let t2om2 = mul_series(&t2, &om2, n);
    let mut w: Vec<K> = t2om2.iter().map(|c| c.neg()).collect();
    w[0] = w[0].add(K::one());
    if w[0].contains_zero() {
        return None;
    }
    let inv_w = recip_series(&w, n);
    let pmq = sub(rho, om);
    let t_om = mul_series(t, om, n);
    let rho_pmq = mul_series(rho, &pmq, n);
    let core = mul_series(&t_om, &rho_pmq, n);
    // rho' = -2 y rho om (rho - om) / w
    let drho = scale_i(&mul_series(&core, &inv_w, n), -2);
    // om' = (1 - 3 om)/y + 2 y om^2 (rho - om) / w
    if t[0].contains_zero() {
        return None;
    }
    let inv_t = recip_series(t, n);
    let mut one_m3om: Vec<K> = om.iter().map(|c| c.scale_int(-3)).collect();
    one_m3om[0] = one_m3om[0].add(K::one());
    let part1 = mul_series(&one_m3om, &inv_t, n);
    let t_om2 = mul_series(t, &om2, n);
    let t_om2_pmq = mul_series(&t_om2, &pmq, n);
    let part2 = scale_i(&mul_series(&t_om2_pmq, &inv_w, n), 2);
    let dom = add(&part1, &part2);
    Some((drho, dom, w, inv_w))
}

/// RHS series for all components through order `n-1`.
pub fn rhs_series<K: Ring>(
    field: FieldId,
    one_minus_lambda: Option<K>,
    t: &[K],
    state: &[Vec<K>],
    n: usize,
) -> Option<Vec<Vec<K>>> {
    match field {
        FieldId::LpSystem => {
            let (drho, dom, _, _) = lp_rhs_series(t, &state[0], &state[1], n)?;
            Some(vec![drho, dom])
        }
        FieldId::EfunOde => {
            let (rho, om, psi, phi) = (&state[0], &state[1], &state[2], &state[3]);
            let (drho, dom, _w, inv_w) = lp_rhs_series(t, rho, om, n)?;
            let c1 = one_minus_lambda.expect("lambda required");
            let inv_t = recip_series(t, n);
            if rho[0].contains_zero() {
                return None;
            }
            let inv_rho = recip_series(rho, n);
            // w' = -2 y om^2 - 2 y^2 om om', substituting the profile ODE
            let om2 = mul_series(om, om, n);
            let t_om2 = mul_series(t, &om2, n);
            let t2 = mul_series(t, t, n);
            let t2om = mul_series(&t2, om, n);
            let t2om_dom = mul_series(&t2om, &dom, n);
            let dw: Vec<K> = (0..n)
                .map(|k| t_om2[k].add(t2om_dom[k]).scale_int(-2))
                .collect();
            // v = y om, v' = om + y om'
            let v = mul_series(t, om, n);
            let t_dom = mul_series(t, &dom, n);
            let vp = add(om, &t_dom);

            let rhoq = mul_series(&drho, &inv_rho, n); // rho'/rho
            let dw_invw = mul_series(&dw, &inv_w, n);
            let v_invw = mul_series(&v, &inv_w, n);
            // V1 = 2/y - rho'/rho + w'/w + 2(1-lambda) v/w
            let mut v1 = scale_i(&inv_t, 2);
            v1 = sub(&v1, &rhoq);
            v1 = add(&v1, &dw_invw);
            v1 = add(&v1, &scale_k(&v_invw, c1.scale_int(2)));
            // V2 = -2/y^2 - 2 rho'/(y rho) + 2 w'/(y w) + 4(1-l) v/(y w)
            //      + 2 rho/w + 2(1-l) v'/w - (2-l)(1-l)/w
            let inv_t2 = mul_series(&inv_t, &inv_t, n);
            let mut v2 = scale_i(&inv_t2, -2);
            v2 = sub(&v2, &scale_i(&mul_series(&rhoq, &inv_t, n), 2));
            v2 = add(&v2, &scale_i(&mul_series(&dw_invw, &inv_t, n), 2));
            v2 = add(
                &v2,
                &scale_k(&mul_series(&v_invw, &inv_t, n), c1.scale_int(4)),
            );
            v2 = add(&v2, &scale_i(&mul_series(rho, &inv_w, n), 2));
            let vp_invw = mul_series(&vp, &inv_w, n);
            v2 = add(&v2, &scale_k(&vp_invw, c1.scale_int(2)));
            let two_ml = K::one().add(c1); // 2 - lambda = 1 + (1 - lambda)
            v2 = sub(&v2, &scale_k(&inv_w, two_ml.mul(c1)));

            // psi' = phi, phi' = -V1 phi - V2 psi
            let dpsi = phi.clone();
            let v1phi = mul_series(&v1, phi, n);
            let v2psi = mul_series(&v2, psi, n);
            let dphi: Vec<K> = (0..n).map(|k| v1phi[k].add(v2psi[k]).neg()).collect();
            Some(vec![drho, dom, dpsi, dphi])
        }
    }
}

/// Pointwise singular-locus margin: w = 1 - y^2 om^2 and y itself must stay
/// clear of zero with a little room.
pub fn margin_ok<T: Scalar>(field: FieldId, t: Interval<T>, state: &[CInterval<T>]) -> bool {
    let margin = T::from_f64_nearest(1e-4);
    if t.lo() < margin {
        return false;
    }
    let om = state[1].re;
    let w = Interval::one() - (t * om).pow_int(2).unwrap();
    let w_ok = w.lo() > T::from_f64_nearest(1e-7);
    let rho_ok = match field {
        FieldId::LpSystem => true,
        FieldId::EfunOde => !state[0].re.contains_zero(),
    };
    w_ok && rho_ok
}
