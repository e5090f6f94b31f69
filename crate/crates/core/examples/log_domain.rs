//! Arithmetic far below the double-precision range: sums and differences of
//! numbers like 1e-10000 kept as logarithms.

use spiraldim::numerics::{Dd, LogReal, Precision};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let prec = Precision::from_env()?;
    let eps = LogReal::pow10(-10000.0);
    let two_eps = eps.try_add(eps, prec)?;
    println!("eps = {eps}, 2 eps = {two_eps}");
    println!("log10(2 eps) = {:.15}", two_eps.log10_abs().unwrap_or(f64::NAN));
    let root = eps.powf(Dd::from(0.5))?;
    println!("sqrt(eps) = {root}, product with eps = {}", root * eps);
    let a = LogReal::from_f64(1.0);
    for gap in [-15.0, -25.0] {
        let b = a.try_add(LogReal::pow10(gap), prec)?;
        match b.try_sub(a, prec) {
            Ok(d) => println!("(1 + 1e{gap}) - 1 = {d}"),
            Err(e) => println!("(1 + 1e{gap}) - 1 refused at {} digits: {e}", prec.digits()),
        }
    }
    Ok(())
}
