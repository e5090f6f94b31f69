//! Sector-scheme dimensions of the (n, n) spiral for the configurations
//! `(3,2) (3,11) (11,2) (11,11)` at eps = 1e-10000, next to the exact values.

use spiraldim::numerics::{LogReal, Precision};
use spiraldim::sector::{estimate_dimension, K5Mode, DEFAULT_R0, DEFAULT_SECTORS};
use spiraldim::spirals::{FocusParams, Orientation};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let eps = LogReal::pow10(-10000.0);
    println!("{:>3} {:>3} {:>12} {:>12} {:>12}", "n", "k", "approx K5", "exact K5", "analytic");
    for (n, k) in [(3, 2), (3, 11), (11, 2), (11, 11)] {
        let p = FocusParams::nn(n, k, Orientation::Stable)?;
        let prec = Precision::from_env()?;
        let a = estimate_dimension(p, DEFAULT_R0, 0.0, DEFAULT_SECTORS, eps, K5Mode::Approximate, prec)?;
        let e = estimate_dimension(p, DEFAULT_R0, 0.0, DEFAULT_SECTORS, eps, K5Mode::Exact, prec)?;
        println!("{n:>3} {k:>3} {:>12.6} {:>12.6} {:>12.6}", a.max_d, e.max_d, a.analytic_d);
    }
    Ok(())
}
