//! Enclosures of the sonic point y* and the central density rho(0).
//!
//! The sonic point is characterised as the smallest parameter whose backward
//! profile solve crosses below omega = 1/3 while omega' stays positive. The
//! upper bound comes from verifying that crossing; the lower bound from
//! exhibiting omega'(y_d) < 0 at y_d = 0.001. Both predicates are decided on
//! validated trajectories launched from certified series data at z = 1 - delta.

use std::time::Instant;

use rayon::prelude::*;

use crate::cert::{Certificate, Status};
use crate::cinterval::CInterval;
use crate::interval::Interval;
use crate::lp::growth::{verify_sonic_growth, GrowthConstants};
use crate::lp::sonic::sonic_coeffs;
use crate::ode::{self, FieldId, FieldParams, IvpProblem, StepOptions, Trajectory};
use crate::scalar::Scalar;
use crate::series::eval_poly_real;
use crate::taylor::{tail_eval, TailBound};

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Truncation order for the sonic series data.
    pub n_sonic: usize,
    /// delta as a rational (numerator, denominator): data at z = 1 - delta.
    pub delta: (i64, i64),
    pub step: StepOptions,
    /// Bisection stops when the bracket is at most this wide.
    pub target_width: f64,
    /// Verify the crossing predicate over [upper bound, 3].
    pub sweep_upper: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            n_sonic: 200,
            delta: (2, 25),
            step: StepOptions::default(),
            target_width: 2e-10,
            sweep_upper: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct YstarEnclosure<T: Scalar> {
    pub interval: Interval<T>,
    pub certificate: Certificate,
}

#[derive(Debug, Clone)]
pub struct Rho0Enclosure<T: Scalar> {
    pub interval: Interval<T>,
    /// Anchor point near y*/100 where the solve hands over to monotonicity.
    pub anchor: Interval<T>,
    pub rho_anchor: Interval<T>,
    pub omega_anchor: Interval<T>,
    pub certificate: Certificate,
}

/// Certified profile data at z = 1 - delta for a y* box: series value plus
/// truncation tail under the (8.25, 1.95) growth regime.
pub fn sonic_data<T: Scalar>(
    ystar: Interval<T>,
    n: usize,
    delta: (i64, i64),
) -> Option<(Interval<T>, Vec<CInterval<T>>)> {
    let s = sonic_coeffs(ystar, n).ok()?;
    let gc: GrowthConstants<T> =
        GrowthConstants::new(Interval::ratio(33, 4), Interval::ratio(39, 20));
    let tb = TailBound::new(gc.c, gc.alpha, 2, 2);
    let delta_iv = Interval::ratio(delta.0, delta.1);
    let eps = gc.c * delta_iv;
    let err = tail_eval(&tb, n, eps, 0).ok()?;
    let pad = Interval::new(-err.hi(), err.hi());
    let u = -delta_iv;
    let rho = eval_poly_real(&s.rho, u) + pad;
    let om = eval_poly_real(&s.omega, u) + pad;
    let y0 = ystar * (Interval::one() + u);
    Some((y0, vec![CInterval::from_real(rho), CInterval::from_real(om)]))
}

/// omega' of the profile field on a box.
fn omega_prime<T: Scalar>(
    y: Interval<T>,
    rho: Interval<T>,
    om: Interval<T>,
) -> Option<Interval<T>> {
    let w = Interval::one() - (y * om).pow_int(2).unwrap();
    if w.contains_zero() || y.contains_zero() {
        return None;
    }
    Some(
        (Interval::one() - Interval::int(3) * om) / y
            + Interval::int(2) * y * om * om * (rho - om) / w,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Pred {
    Holds,
    Unknown,
}

/// Crossing predicate: the trajectory passes strictly below 1/3 while
/// omega' > 0 has held on every step so far (including the crossing step).
fn crossing_predicate<T: Scalar>(ystar: Interval<T>, opts: &SolveOptions) -> Pred {
    let third = Interval::ratio(1, 3);
    let Some((y0, state)) = sonic_data(ystar, opts.n_sonic, opts.delta) else {
        return Pred::Unknown;
    };
    let p = IvpProblem {
        field: FieldId::LpSystem,
        params: FieldParams::none(),
        t0: y0,
        t1: Interval::point(T::from_f64_nearest(0.0015)),
        y0: state,
    };
    let run = ode::run(&p, &opts.step);
    for st in &run.trajectory.steps {
        let span = st.t_start.hull(st.t_end);
        let Some(dom) = omega_prime(span, st.apriori[0].re, st.apriori[1].re) else {
            return Pred::Unknown;
        };
        if dom.lo() <= T::zero() {
            return Pred::Unknown;
        }
        let om_end = st.eval(st.t_end)[1].re;
        if om_end.hi() < third.lo() {
            return Pred::Holds;
        }
    }
    Pred::Unknown
}

/// Departure predicate: at some y_d (down to 0.001) the trajectory has
/// omega'(y_d) < 0 strictly while omega has stayed strictly above 1/3 the
/// whole way, which rules out any admissible crossing for this parameter.
fn departure_predicate<T: Scalar>(ystar: Interval<T>, opts: &SolveOptions) -> Pred {
    let third = Interval::ratio(1, 3);
    let Some((y0, state)) = sonic_data(ystar, opts.n_sonic, opts.delta) else {
        return Pred::Unknown;
    };
    let y_d = T::from_f64_nearest(0.001);
    let p = IvpProblem {
        field: FieldId::LpSystem,
        params: FieldParams::none(),
        t0: y0,
        t1: Interval::point(y_d),
        y0: state,
    };
    let run = ode::run(&p, &opts.step);
    for st in &run.trajectory.steps {
        if st.apriori[1].re.lo() <= third.hi() {
            return Pred::Unknown;
        }
        let end = st.eval(st.t_end);
        if let Some(d) = omega_prime(st.t_end, end[0].re, end[1].re) {
            if d.hi() < T::zero() {
                return Pred::Holds;
            }
        }
    }
    Pred::Unknown
}

/// Adaptive sweep of the crossing predicate over [lo, hi] by box bisection.
fn sweep_crossing<T: Scalar>(
    lo: T,
    hi: T,
    opts: &SolveOptions,
    max_depth: u32,
) -> (bool, u64) {
    let mut stack = vec![(Interval::new(lo, hi), 0u32)];
    let mut boxes: Vec<(Interval<T>, u32)> = Vec::new();
    while let Some(top) = stack.pop() {
        boxes.push(top);
        if boxes.len() > 64 {
            break;
        }
    }
    // depth-first with work stealing: collect leaves breadth-first first
    let mut leaves = vec![];
    let mut queue = boxes;
    queue.extend(stack);
    let mut subdivisions = 0u64;
    while let Some((b, d)) = queue.pop() {
        if d >= 6 || queue.len() > 512 {
            leaves.push((b, d));
        } else {
            let (l, r) = b.bisect();
            subdivisions += 1;
            queue.push((l, d + 1));
            queue.push((r, d + 1));
        }
    }
    let results: Vec<bool> = leaves
        .par_iter()
        .map(|(b, d)| sweep_leaf(*b, *d, opts, max_depth, &mut 0))
        .collect();
    (results.iter().all(|&r| r), subdivisions)
}

fn sweep_leaf<T: Scalar>(
    b: Interval<T>,
    depth: u32,
    opts: &SolveOptions,
    max_depth: u32,
    subdivisions: &mut u64,
) -> bool {
    if crossing_predicate(b, opts) == Pred::Holds {
        return true;
    }
    if depth >= max_depth || b.is_point() {
        return false;
    }
    let (l, r) = b.bisect();
    *subdivisions += 1;
    sweep_leaf(l, depth + 1, opts, max_depth, subdivisions)
        && sweep_leaf(r, depth + 1, opts, max_depth, subdivisions)
}

/// Enclosure of the sonic point by bisection of the two predicates over the
/// search interval, with the growth certificate established first.
pub fn enclose_ystar<T: Scalar>(search: Interval<T>, opts: &SolveOptions) -> YstarEnclosure<T> {
    let t0 = Instant::now();
    let mut cert = Certificate::new("sonic_point")
        .param_interval("search", search)
        .param_int("N", opts.n_sonic as i64)
        .param_interval(
            "delta",
            Interval::<T>::ratio(opts.delta.0, opts.delta.1),
        );

    let growth = verify_sonic_growth(
        Interval::<T>::new(T::from_f64_nearest(2.0), T::from_f64_nearest(3.0)),
        GrowthConstants::new(Interval::ratio(33, 4), Interval::ratio(39, 20)),
    );
    if growth.status != Status::Verified {
        let c = cert
            .note("series growth certificate failed; no data bounds")
            .status(Status::Inconclusive)
            .finish(t0);
        return YstarEnclosure {
            interval: search,
            certificate: c,
        };
    }

    let mut lo = search.lo();
    let mut hi = search.hi();
    // bracket sanity at the endpoints
    if departure_predicate(Interval::point(lo), opts) != Pred::Holds
        || crossing_predicate(Interval::point(hi), opts) != Pred::Holds
    {
        let c = cert
            .note("bracket endpoints do not separate the predicates")
            .status(Status::Inconclusive)
            .finish(t0);
        return YstarEnclosure {
            interval: search,
            certificate: c,
        };
    }

    let mut probes = 0u64;
    let target = T::from_f64_nearest(opts.target_width);
    loop {
        let width = hi - lo;
        if width <= target {
            break;
        }
        let quarter = width * T::from_f64_nearest(0.25);
        let mids = [lo + quarter, lo + quarter + quarter, hi - quarter];
        let mut progress = false;
        // shrink from the right: smallest probe with a verified crossing
        for &m in mids.iter().rev() {
            probes += 1;
            if m > lo
                && m < hi
                && crossing_predicate(Interval::point(m), opts) == Pred::Holds
            {
                hi = m;
                progress = true;
                break;
            }
        }
        // shrink from the left: largest probe with verified departure
        for &m in mids.iter().rev() {
            probes += 1;
            if m > lo && m < hi && departure_predicate(Interval::point(m), opts) == Pred::Holds
            {
                lo = m;
                progress = true;
                break;
            }
        }
        if !progress {
            break;
        }
    }

    let interval = Interval::new(lo, hi);
    cert = cert
        .enclosure("ystar", interval)
        .param_int("probes", probes as i64);
    cert.stats.worker_count = rayon::current_num_threads();

    let mut status = if (hi - lo) <= target * T::from_f64_nearest(2.5) {
        Status::Verified
    } else {
        Status::Inconclusive
    };
    if opts.sweep_upper && status == Status::Verified {
        let (ok, subs) = sweep_crossing(hi, T::from_f64_nearest(2.9999), opts, 24);
        cert.stats.subdivisions = subs;
        if !ok {
            cert = cert.note("crossing sweep above the upper bound incomplete");
            status = Status::Inconclusive;
        }
    }
    YstarEnclosure {
        interval,
        certificate: cert.status(status).finish(t0),
    }
}

/// Enclosure of rho(0): validated solve to an anchor near y*/100, then the
/// two monotonicity bounds extend it to the origin.
pub fn enclose_rho0<T: Scalar>(ystar: Interval<T>, opts: &SolveOptions) -> Rho0Enclosure<T> {
    let t0 = Instant::now();
    let mut cert = Certificate::new("rho0").param_interval("ystar", ystar);
    let fail = |cert: Certificate, note: &str| Rho0Enclosure {
        interval: Interval::new(T::from_f64_nearest(0.5), T::from_f64_nearest(0.95)),
        anchor: Interval::zero(),
        rho_anchor: Interval::zero(),
        omega_anchor: Interval::zero(),
        certificate: cert.note(note).status(Status::Inconclusive).finish(t0),
    };

    let growth = verify_sonic_growth(
        Interval::<T>::new(T::from_f64_nearest(2.0), T::from_f64_nearest(3.0)),
        GrowthConstants::new(Interval::ratio(33, 4), Interval::ratio(39, 20)),
    );
    if growth.status != Status::Verified {
        return fail(cert, "series growth certificate failed");
    }
    let Some((y0, state)) = sonic_data(ystar, opts.n_sonic, opts.delta) else {
        return fail(cert, "series data construction failed");
    };
    // anchor: exact float near mid(y*)/100
    let anchor_pt = T::from_f64_nearest(ystar.mid().to_f64_exact() / 100.0);
    let anchor = Interval::point(anchor_pt);
    let p = IvpProblem {
        field: FieldId::LpSystem,
        params: FieldParams::none(),
        t0: y0,
        t1: anchor,
        y0: state,
    };
    let run = ode::run(&p, &opts.step);
    if run.stopped.is_some() {
        return fail(cert, "validated solve did not reach the anchor");
    }
    let rho_a = run.trajectory.end_state[0].re;
    let om_a = run.trajectory.end_state[1].re;

    // monotone extension to the origin:
    //   rho(0) <= rho(a) + 0.833 om_hi (0.833 - 1/3) / (1 - a^2 om_hi^2) a^2
    //   rho(0) >= rho(a) + rho_lo (1/3) (rho_lo - om_hi) a^2
    // both require the brackets that make the integrand bounds valid
    let third = Interval::ratio(1, 3);
    let c833 = Interval::ratio(833, 1000);
    let a2 = anchor * anchor;
    let om_hi = Interval::point(om_a.hi());
    let rho_lo = Interval::point(rho_a.lo());
    let rho_hi = Interval::point(rho_a.hi());
    let upper = rho_hi + c833 * om_hi * (c833 - third) / (Interval::one() - a2 * om_hi * om_hi) * a2;
    let lower = rho_lo + rho_lo * third * (rho_lo - om_hi) * a2;
    // bootstrap consistency for the upper bound and sign for the lower
    if upper.hi() > c833.lo() {
        return fail(cert, "bootstrap bracket rho <= 0.833 not self-consistent");
    }
    if (rho_lo - om_hi).lo() <= T::zero() || om_a.lo() < third.lo() - T::from_f64_nearest(1e-3)
    {
        return fail(cert, "anchor values outside the monotone brackets");
    }
    let interval = Interval::new(lower.lo(), upper.hi());
    cert = cert
        .enclosure("rho0", interval)
        .enclosure("rho_anchor", rho_a)
        .enclosure("omega_anchor", om_a)
        .enclosure("anchor", anchor);
    Rho0Enclosure {
        interval,
        anchor,
        rho_anchor: rho_a,
        omega_anchor: om_a,
        certificate: cert.status(Status::Verified).finish(t0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type I = Interval<f64>;

    fn fast_opts() -> SolveOptions {
        SolveOptions {
            sweep_upper: false,
            ..SolveOptions::default()
        }
    }

    #[test]
    fn predicates_separate_cleanly() {
        let opts = fast_opts();
        assert_eq!(
            crossing_predicate(I::point(2.35), &opts),
            Pred::Holds,
            "crossing at 2.35"
        );
        assert_eq!(
            departure_predicate(I::point(2.33), &opts),
            Pred::Holds,
            "departure at 2.33"
        );
        // on the wrong sides the predicates must not fire
        assert_eq!(crossing_predicate(I::point(2.33), &opts), Pred::Unknown);
        assert_eq!(departure_predicate(I::point(2.35), &opts), Pred::Unknown);
    }

    #[test]
    fn paper_point_probes() {
        let opts = fast_opts();
        // the paper's two anchor probes
        assert_eq!(
            departure_predicate(I::point(2.3411172805), &opts),
            Pred::Holds
        );
        assert_eq!(
            crossing_predicate(I::point(2.34111728062), &opts),
            Pred::Holds
        );
        // crossing for candidate y* = 3 (endpoint of the sweep)
        assert_eq!(crossing_predicate(I::point(2.9999), &opts), Pred::Holds);
    }

    #[test]
    fn ystar_enclosure_contains_paper_interval() {
        let e = enclose_ystar(I::new(2.3, 2.4), &fast_opts());
        assert_eq!(e.certificate.status, Status::Verified, "{:?}", e.certificate.notes);
        assert!(e.interval.lo() <= 2.3411172805);
        assert!(e.interval.hi() >= 2.34111728062);
        let width = e.interval.width();
        println!("ystar = {:?} width {:.3e}", e.interval, width);
        assert!(width <= 5e-10, "width {width:.3e}");
    }

    #[test]
    fn rho0_enclosure_contains_paper_interval() {
        let ys = enclose_ystar(I::new(2.3, 2.4), &fast_opts());
        let r = enclose_rho0(ys.interval, &fast_opts());
        assert_eq!(r.certificate.status, Status::Verified, "{:?}", r.certificate.notes);
        println!(
            "rho0 = {:?} width {:.3e}; anchor rho {:?} om {:?}",
            r.interval,
            r.interval.width(),
            r.rho_anchor,
            r.omega_anchor
        );
        assert!(r.interval.lo() <= 0.83290803 && r.interval.hi() >= 0.83290811);
        assert!(r.interval.width() <= 1e-7);
        assert!(r.rho_anchor.lo() <= 0.832832036 && r.rho_anchor.hi() >= 0.832832045);
        assert!(
            r.omega_anchor.intersect(I::new(0.333318, 0.333376)).is_some()
        );
    }
}
