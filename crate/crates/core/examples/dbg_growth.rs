use collapse_core::interval::Interval;
use collapse_core::lp::growth::GrowthConstants;
use collapse_core::lp::sonic::sonic_coeffs;
type I = Interval<f64>;
fn main() {
    let gc = GrowthConstants::new(I::ratio(33, 4), I::ratio(39, 20));
    for (lo, hi) in [(2.0, 2.0000000001), (2.9999999999, 3.0), (2.0,2.00000000000001), (2.999999999999999, 3.0)] {
        let y = I::new(lo, hi);
        match sonic_coeffs(y, 3) {
            Err(e) => println!("[{lo},{hi}]: series error {e:?}"),
            Ok(s) => {
                let d = gc.quad_d(y);
                let (ff, gg) = collapse_core::lp::growth::debug_fg(&s, &gc, d);
                let ym1 = y - I::one();
                let rho_clo = I::int(4) / (I::int(2) * (I::int(4) * ym1 - I::one())) * ff;
                let om_clo = gg / (I::int(2) * ym1) + ff / (I::int(2) * ym1 * (I::int(4) * ym1 - I::one()));
                let c2 = gc.cpow(2) / I::int(4);
                let c3 = gc.cpow(3) / I::int(9);
                println!("[{lo},{hi}]: rho_clo.hi={} om_clo.hi={}", rho_clo.hi(), om_clo.hi());
                println!("   om2.abs.hi={} c2.lo={}  -> {}", s.omega[2].abs().hi(), c2.lo(), s.omega[2].abs().hi() < c2.lo());
                println!("   rho3.abs.hi={} c3.lo={}", s.rho[3].abs().hi(), c3.lo());
                println!("   om3.abs.hi={}", s.omega[3].abs().hi());
                println!("   rhom3={} d*c3={}", s.rhom[3].abs().hi(), (d*c3).lo());
            }
        }
    }
}
