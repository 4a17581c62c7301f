use collapse_core::interval::Interval;
use collapse_core::ode::*;
use collapse_core::lp::solve::sonic_data;
type I = Interval<f64>;
fn main() {
    let ys = I::new(2.3411172805, 2.34111728062);
    let (y0, state) = sonic_data(ys, 200, (2, 25)).unwrap();
    println!("data rho={:?} om={:?}", state[0].re, state[1].re);
    let anchor = ys.mid() / 100.0;
    println!("anchor {anchor}");
    let p = IvpProblem { field: FieldId::LpSystem, params: FieldParams::none(), t0: y0, t1: I::point(anchor), y0: state };
    let r = run(&p, &StepOptions::default());
    println!("stopped={:?} steps={} end_t={:?}", r.stopped, r.trajectory.steps.len(), r.trajectory.end_time);
    if let Some(last) = r.trajectory.steps.last() {
        println!("last step: t {:?} -> {:?}", last.t_start, last.t_end);
        println!("apriori rho {:?} om {:?}", last.apriori[0].re, last.apriori[1].re);
        println!("dev {:?} {:?}", last.dev_start[0].re.width(), last.dev_start[1].re.width());
    }
}
