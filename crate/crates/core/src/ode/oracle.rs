//! Non-rigorous adaptive Runge-Kutta oracle at floating midpoints.
//!
//! Test-only support: validated enclosures are checked to contain these
//! trajectories, never the other way around.

use crate::scalar::Scalar;

use super::fields::FieldId;

/// Plain complex double pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

impl C64 {
    pub fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }
    pub fn real(re: f64) -> Self {
        C64 { re, im: 0.0 }
    }
    fn add(self, o: Self) -> Self {
        C64::new(self.re + o.re, self.im + o.im)
    }
    fn sub(self, o: Self) -> Self {
        C64::new(self.re - o.re, self.im - o.im)
    }
    fn mul(self, o: Self) -> Self {
        C64::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
    fn div(self, o: Self) -> Self {
        let d = o.re * o.re + o.im * o.im;
        C64::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
    fn scale(self, s: f64) -> Self {
        C64::new(self.re * s, self.im * s)
    }
    pub fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }
}

fn lp_rhs(y: f64, s: &[f64; 2]) -> [f64; 2] {
    let (rho, om) = (s[0], s[1]);
    let w = 1.0 - y * y * om * om;
    let core = 2.0 * y * om * (rho - om) / w;
    [-rho * core, (1.0 - 3.0 * om) / y + om * core]
}

fn efun_rhs(y: f64, s: &[C64; 4], oml: C64) -> [C64; 4] {
    let rho = s[0].re;
    let om = s[1].re;
    let lp = lp_rhs(y, &[rho, om]);
    let w = 1.0 - y * y * om * om;
    let dw = -2.0 * y * om * om - 2.0 * y * y * om * lp[1];
    let v = y * om;
    let vp = om + y * lp[1];
    let v1 = C64::real(2.0 / y - lp[0] / rho + dw / w).add(oml.scale(2.0 * v / w));
    let two_ml = C64::real(1.0).add(oml);
    let v2 = C64::real(
        -2.0 / (y * y) - 2.0 * lp[0] / (y * rho) + 2.0 * dw / (y * w) + 2.0 * rho / w,
    )
    .add(oml.scale(4.0 * v / (y * w)))
    .add(oml.scale(2.0 * vp / w))
    .sub(two_ml.mul(oml).scale(1.0 / w));
    let (psi, phi) = (s[2], s[3]);
    [
        C64::real(lp[0]),
        C64::real(lp[1]),
        phi,
        v1.mul(phi).add(v2.mul(psi)).scale(-1.0),
    ]
}

/// One (t, state) sample per accepted step.
pub type Samples = Vec<(f64, Vec<C64>)>;

/// Adaptive RK45 (Cash-Karp) from t0 to t1 at midpoint data/parameters.
pub fn float_oracle<T: Scalar>(
    field: FieldId,
    one_minus_lambda: Option<(f64, f64)>,
    t0: f64,
    t1: f64,
    y0: &[C64],
    n_samples: usize,
) -> Samples {
    let f = |t: f64, s: &Vec<C64>| -> Vec<C64> {
        match field {
            FieldId::LpSystem => {
                let r = lp_rhs(t, &[s[0].re, s[1].re]);
                vec![C64::real(r[0]), C64::real(r[1])]
            }
            FieldId::EfunOde => {
                let oml = one_minus_lambda
                    .map(|(a, b)| C64::new(a, b))
                    .expect("lambda required");
                let r = efun_rhs(t, &[s[0], s[1], s[2], s[3]], oml);
                r.to_vec()
            }
        }
    };
    let mut out: Samples = Vec::new();
    let mut t = t0;
    let mut s: Vec<C64> = y0.to_vec();
    out.push((t, s.clone()));
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let mut h = (t1 - t0).abs() / 256.0;
    let tol = 1e-12;
    let mut guard = 0usize;
    while (t1 - t) * dir > 0.0 && guard < 2_000_000 {
        guard += 1;
        h = h.min((t1 - t).abs()).max(1e-15);
        let (s5, err) = rk45_step(&f, t, &s, h * dir);
        let scale = s.iter().map(|c| c.norm()).fold(1.0, f64::max);
        if err <= tol * scale || h <= 1e-14 {
            t += h * dir;
            s = s5;
            out.push((t, s.clone()));
            h *= 1.2;
        } else {
            h *= 0.5;
        }
    }
    // thin to n_samples, keep first/last
    if n_samples > 1 && out.len() > n_samples {
        let stride = out.len() / n_samples;
        let mut thin: Samples = out.iter().step_by(stride.max(1)).cloned().collect();
        if thin.last().map(|p| p.0) != out.last().map(|p| p.0) {
            thin.push(out.last().unwrap().clone());
        }
        return thin;
    }
    out
}

#[allow(clippy::type_complexity)]
fn rk45_step(
    f: &dyn Fn(f64, &Vec<C64>) -> Vec<C64>,
    t: f64,
    s: &[C64],
    h: f64,
) -> (Vec<C64>, f64) {
    const A: [f64; 5] = [1.0 / 5.0, 3.0 / 10.0, 3.0 / 5.0, 1.0, 7.0 / 8.0];
    const B: [[f64; 5]; 5] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0],
        [3.0 / 10.0, -9.0 / 10.0, 6.0 / 5.0, 0.0, 0.0],
        [-11.0 / 54.0, 5.0 / 2.0, -70.0 / 27.0, 35.0 / 27.0, 0.0],
        [
            1631.0 / 55296.0,
            175.0 / 512.0,
            575.0 / 13824.0,
            44275.0 / 110592.0,
            253.0 / 4096.0,
        ],
    ];
    const C5: [f64; 6] = [
        37.0 / 378.0,
        0.0,
        250.0 / 621.0,
        125.0 / 594.0,
        0.0,
        512.0 / 1771.0,
    ];
    const C4: [f64; 6] = [
        2825.0 / 27648.0,
        0.0,
        18575.0 / 48384.0,
        13525.0 / 55296.0,
        277.0 / 14336.0,
        1.0 / 4.0,
    ];
    let dim = s.len();
    let mut k: Vec<Vec<C64>> = Vec::with_capacity(6);
    k.push(f(t, &s.to_vec()));
    for i in 0..5 {
        let mut stage = s.to_vec();
        for (j, kj) in k.iter().enumerate() {
            for d in 0..dim {
                stage[d] = stage[d].add(kj[d].scale(h * B[i][j]));
            }
        }
        k.push(f(t + A[i] * h, &stage));
    }
    let mut s5 = s.to_vec();
    let mut s4 = s.to_vec();
    for (j, kj) in k.iter().enumerate() {
        for d in 0..dim {
            s5[d] = s5[d].add(kj[d].scale(h * C5[j]));
            s4[d] = s4[d].add(kj[d].scale(h * C4[j]));
        }
    }
    let err = (0..dim)
        .map(|d| s5[d].sub(s4[d]).norm())
        .fold(0.0, f64::max);
    (s5, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_starts_at_initial_data() {
        let y0 = [C64::real(0.5), C64::real(0.42)];
        let s = float_oracle::<f64>(FieldId::LpSystem, None, 2.0, 1.0, &y0, 10);
        assert_eq!(s[0].0, 2.0);
        assert_eq!(s[0].1[0], y0[0]);
    }

    #[test]
    fn lp_monotone_profile() {
        // start from near-sonic midpoint data: om decreases toward 1/3 as y
        // decreases, rho increases; both stay in their brackets
        let ys = 2.34111728056;
        let z0 = 1.0 - 0.08;
        // midpoint series evaluation
        let s = crate::lp::sonic_coeffs(
            crate::interval::Interval::<f64>::from_f64(ys),
            120,
        )
        .unwrap();
        let u = crate::interval::Interval::<f64>::from_f64(-0.08);
        let rho0 = crate::series::eval_poly_real(&s.rho, u).mid();
        let om0 = crate::series::eval_poly_real(&s.omega, u).mid();
        let y0 = [C64::real(rho0), C64::real(om0)];
        let samples =
            float_oracle::<f64>(FieldId::LpSystem, None, ys * z0, 0.02, &y0, 2000);
        // the backward solve is violently unstable in the 1/y^3 mode, so
        // monotonicity is only clean away from the origin
        let mut prev_om = f64::INFINITY;
        for (t, st) in &samples {
            if *t > 0.05 {
                assert!(st[1].re < prev_om + 1e-9, "omega not decreasing at y={t}");
                prev_om = st[1].re;
            }
            assert!(st[0].re > 0.4 && st[0].re < 0.9);
            assert!(st[1].re > 1.0 / 3.0 - 1e-4 && st[1].re < 0.5);
        }
        let last = samples.last().unwrap();
        assert!((last.1[1].re - 1.0 / 3.0).abs() < 1e-3);
    }
}
