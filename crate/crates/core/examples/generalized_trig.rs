//! The generalized trigonometric pair (Cs, Sn): conserved energy, period
//! from the gamma function against the ODE first return, and the integral
//! of Sn^(n-1) Cs^(m-1) over one period.

use std::f64::consts::TAU;

use spiraldim::spirals::{period_first_return, period_t, GenTrig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>3} {:>3} {:>14} {:>10} {:>12} {:>12}", "m", "n", "period", "return", "energy", "integral");
    for (m, n) in [(1, 1), (3, 1), (1, 3), (3, 3), (5, 3), (2, 3)] {
        let g = GenTrig::build(m, n)?;
        let t = period_t(m, n)?;
        let ret = period_first_return(m, n)?;
        let energy = (0..1000)
            .map(|i| {
                let (c, s) = g.eval(i as f64 * 0.037);
                (c.powi(2 * m as i32) + s.powi(2 * n as i32) - 1.0).abs()
            })
            .fold(0.0, f64::max);
        let integral = g.integral_over_period();
        let odd = m % 2 == 1 && n % 2 == 1;
        let expect = if odd { TAU / (m * n) as f64 } else { 0.0 };
        println!(
            "{m:>3} {n:>3} {t:>14.10} {:>10.1e} {energy:>12.1e} {integral:>12.8} (expect {expect:.8})",
            (t - ret).abs()
        );
    }
    Ok(())
}
